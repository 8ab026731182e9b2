//! Concrete syntax for grammars (`.sbg`), bags (`.sbb`) and bilingual
//! lexicons (`.sbx`), plus the canonical renderers.
//!
//! ```text
//! # grammar
//! start s.
//! rule s(X|P) -> np(X) vp(X|P).
//! lex np(j) -> "John".
//!
//! # bag: one sign per line
//! np(m) ["Marie"]
//! pp(m) ["à", "Jean"]
//!
//! # bilingual lexicon
//! xfer { v(X,Y,E)["likes"] } => { v(Y,X,E)["plaît"], p(Y,X)["à"] }.
//! ```
//!
//! Uppercase (or `_`-initial) identifiers are variables, everything else is
//! an atom or functor. Variables are scoped to one statement in grammars and
//! lexicons, and to the whole file in bags.

use std::collections::{HashMap, HashSet};

use crate::grammar::{Bag, BilingualEntry, Grammar, Rule, RuleBody, Sign};
use crate::term::{Category, IndexList, IndexTerm, Name, Var, VarGen};
use crate::LoadError;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Str(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Bar,
    Arrow,
    FatArrow,
    Dot,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Str(s) => format!("string {s:?}"),
            Tok::Eof => "end of input".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::FatArrow => "`=>`".into(),
            Tok::Dot => "`.`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn syntax(line: usize, col: usize, msg: impl Into<String>) -> LoadError {
    LoadError::Syntax {
        line,
        col,
        msg: msg.into(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<Spanned>, LoadError> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut col) = (1usize, 1usize);
    while let Some(&c) = chars.peek() {
        let (l, k) = (line, col);
        let bump = |line: &mut usize, col: &mut usize, c: char| {
            if c == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
        };
        if c.is_whitespace() {
            chars.next();
            bump(&mut line, &mut col, c);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let tok = match c {
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            ',' => Tok::Comma,
            '|' => Tok::Bar,
            '.' => Tok::Dot,
            '-' | '=' => {
                chars.next();
                col += 1;
                if chars.peek() != Some(&'>') {
                    return Err(syntax(l, k, format!("expected `{c}>`")));
                }
                chars.next();
                col += 1;
                out.push(Spanned {
                    tok: if c == '-' { Tok::Arrow } else { Tok::FatArrow },
                    line: l,
                    col: k,
                });
                continue;
            }
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                loop {
                    match chars.next() {
                        None | Some('\n') => return Err(syntax(l, k, "unterminated string")),
                        Some('"') => {
                            col += 1;
                            break;
                        }
                        Some('\\') => {
                            col += 2;
                            match chars.next() {
                                Some(e @ ('"' | '\\')) => s.push(e),
                                _ => return Err(syntax(line, col - 2, "bad escape in string")),
                            }
                        }
                        Some(ch) => {
                            col += 1;
                            s.push(ch)
                        }
                    }
                }
                out.push(Spanned {
                    tok: Tok::Str(s),
                    line: l,
                    col: k,
                });
                continue;
            }
            c if is_ident_char(c) => {
                let mut s = String::new();
                while let Some(&c) = chars.peek() {
                    if !is_ident_char(c) {
                        break;
                    }
                    s.push(c);
                    chars.next();
                    col += 1;
                }
                out.push(Spanned {
                    tok: Tok::Ident(s),
                    line: l,
                    col: k,
                });
                continue;
            }
            other => return Err(syntax(l, k, format!("unexpected character {other:?}"))),
        };
        chars.next();
        col += 1;
        out.push(Spanned {
            tok,
            line: l,
            col: k,
        });
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        col,
    });
    Ok(out)
}

fn is_var_name(s: &str) -> bool {
    s.starts_with(|c: char| c.is_uppercase() || c == '_')
}

#[derive(Clone, Copy, PartialEq, Debug)]
enum Sort {
    Item,
    Tail,
}

/// Variable scope: names map to one variable of one sort.
struct Scope<'g> {
    vars: &'g mut VarGen,
    names: HashMap<String, (Var, Sort)>,
}

impl<'g> Scope<'g> {
    fn new(vars: &'g mut VarGen) -> Self {
        Scope {
            vars,
            names: HashMap::new(),
        }
    }

    fn var(&mut self, name: &str, sort: Sort, line: usize, col: usize) -> Result<Var, LoadError> {
        if name == "_" {
            return Ok(self.vars.fresh("_"));
        }
        if let Some((v, s)) = self.names.get(name) {
            if *s != sort {
                return Err(syntax(
                    line,
                    col,
                    format!("variable {name} used both as an index and as a list tail"),
                ));
            }
            return Ok(v.clone());
        }
        let v = self.vars.fresh(name);
        self.names.insert(name.to_string(), (v.clone(), sort));
        Ok(v)
    }
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Result<Self, LoadError> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    fn err_here(&self, what: &str) -> LoadError {
        let t = self.peek();
        syntax(
            t.line,
            t.col,
            format!("expected {what}, found {}", t.tok.describe()),
        )
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<Spanned, LoadError> {
        if self.peek().tok == tok {
            Ok(self.next())
        } else {
            Err(self.err_here(what))
        }
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if &self.peek().tok == tok {
            self.next();
            true
        } else {
            false
        }
    }

    fn functor(&mut self) -> Result<(Name, usize, usize), LoadError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) if !is_var_name(s) => {
                self.next();
                Ok((s.as_str().into(), t.line, t.col))
            }
            _ => Err(self.err_here("a category (lowercase functor)")),
        }
    }

    fn category(&mut self, scope: &mut Scope) -> Result<Category, LoadError> {
        let (functor, ..) = self.functor()?;
        let mut list = IndexList::default();
        if !self.eat(&Tok::LParen) {
            return Ok(Category::new(functor, list));
        }
        if self.eat(&Tok::RParen) {
            return Ok(Category::new(functor, list));
        }
        if self.peek().tok != Tok::Bar {
            loop {
                let t = self.next();
                let item = match &t.tok {
                    Tok::Ident(s) if is_var_name(s) => {
                        IndexTerm::Var(scope.var(s, Sort::Item, t.line, t.col)?)
                    }
                    Tok::Ident(s) => IndexTerm::Atom(s.as_str().into()),
                    other => {
                        return Err(syntax(
                            t.line,
                            t.col,
                            format!("expected an index, found {}", other.describe()),
                        ))
                    }
                };
                list.items.push(item);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if self.eat(&Tok::Bar) {
            let t = self.next();
            match &t.tok {
                Tok::Ident(s) if is_var_name(s) => {
                    list.tail = Some(scope.var(s, Sort::Tail, t.line, t.col)?)
                }
                other => {
                    return Err(syntax(
                        t.line,
                        t.col,
                        format!("expected a tail variable, found {}", other.describe()),
                    ))
                }
            }
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(Category::new(functor, list))
    }

    fn word(&mut self) -> Result<Name, LoadError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Str(s) => {
                if s.is_empty() || s.chars().any(char::is_whitespace) {
                    return Err(syntax(
                        t.line,
                        t.col,
                        format!("word {s:?} must be nonempty and contain no whitespace"),
                    ));
                }
                self.next();
                Ok(s.as_str().into())
            }
            _ => Err(self.err_here("a quoted word")),
        }
    }

    /// `cat [ "w" ("," | " ") "w" ... ]`
    fn sign(&mut self, scope: &mut Scope) -> Result<Sign, LoadError> {
        let category = self.category(scope)?;
        self.expect(Tok::LBracket, "`[` opening the word list")?;
        let mut phon = vec![self.word()?];
        loop {
            if self.eat(&Tok::RBracket) {
                break;
            }
            self.eat(&Tok::Comma);
            phon.push(self.word()?);
        }
        Ok(Sign { category, phon })
    }

    fn keyword(&mut self) -> Result<(String, usize), LoadError> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Ident(s) => {
                self.next();
                Ok((s.clone(), t.line))
            }
            _ => Err(self.err_here("a statement keyword")),
        }
    }
}

/// Parses a grammar file: `start`, `rule` and `lex` statements.
pub fn load_grammar(text: &str) -> Result<Grammar, LoadError> {
    load_grammar_with(text, &mut VarGen::new())
}

pub fn load_grammar_with(text: &str, vars: &mut VarGen) -> Result<Grammar, LoadError> {
    let mut p = Parser::new(text)?;
    let mut start: Option<Name> = None;
    let mut rules = Vec::new();
    while !p.at_eof() {
        let kw_tok = p.peek().clone();
        let (kw, line) = p.keyword()?;
        match kw.as_str() {
            "start" => {
                let (f, l, c) = p.functor()?;
                if start.is_some() {
                    return Err(syntax(l, c, "duplicate start declaration"));
                }
                start = Some(f);
            }
            "rule" | "lex" => {
                let mut scope = Scope::new(vars);
                let lhs = p.category(&mut scope)?;
                p.expect(Tok::Arrow, "`->`")?;
                let body = if kw == "rule" {
                    let mut rhs = vec![p.category(&mut scope)?];
                    while p.peek().tok != Tok::Dot {
                        rhs.push(p.category(&mut scope)?);
                    }
                    RuleBody::Phrasal(rhs)
                } else {
                    let mut ws = vec![p.word()?];
                    while p.peek().tok != Tok::Dot {
                        p.eat(&Tok::Comma);
                        ws.push(p.word()?);
                    }
                    RuleBody::Lexical(ws)
                };
                rules.push(Rule { lhs, body, line });
            }
            other => {
                return Err(syntax(
                    kw_tok.line,
                    kw_tok.col,
                    format!("unknown statement `{other}`"),
                ));
            }
        }
        p.expect(Tok::Dot, "`.` ending the statement")?;
    }
    let start = start.ok_or(LoadError::MissingStart)?;
    Grammar::new(rules, start)
}

/// Parses a bag: a sequence of signs, numbered from 1 in file order.
pub fn load_bag(text: &str) -> Result<Bag, LoadError> {
    load_bag_with(text, &mut VarGen::new())
}

pub fn load_bag_with(text: &str, vars: &mut VarGen) -> Result<Bag, LoadError> {
    let mut p = Parser::new(text)?;
    let mut scope = Scope::new(vars);
    let mut signs = Vec::new();
    while !p.at_eof() {
        signs.push(p.sign(&mut scope)?);
    }
    Bag::new(signs)
}

/// Parses a bilingual lexicon of `xfer { ... } => { ... }.` entries.
pub fn load_bilingual(text: &str) -> Result<Vec<BilingualEntry>, LoadError> {
    load_bilingual_with(text, &mut VarGen::new())
}

pub fn load_bilingual_with(
    text: &str,
    vars: &mut VarGen,
) -> Result<Vec<BilingualEntry>, LoadError> {
    let mut p = Parser::new(text)?;
    let mut entries = Vec::new();
    while !p.at_eof() {
        let kw_tok = p.peek().clone();
        let (kw, line) = p.keyword()?;
        if kw != "xfer" {
            return Err(syntax(
                kw_tok.line,
                kw_tok.col,
                format!("expected `xfer`, found `{kw}`"),
            ));
        }
        let mut scope = Scope::new(vars);
        let side = |p: &mut Parser, scope: &mut Scope| -> Result<Vec<Sign>, LoadError> {
            p.expect(Tok::LBrace, "`{`")?;
            let mut signs = vec![p.sign(scope)?];
            while p.eat(&Tok::Comma) {
                signs.push(p.sign(scope)?);
            }
            p.expect(Tok::RBrace, "`}`")?;
            Ok(signs)
        };
        let source = side(&mut p, &mut scope)?;
        p.expect(Tok::FatArrow, "`=>`")?;
        let target = side(&mut p, &mut scope)?;
        p.expect(Tok::Dot, "`.` ending the entry")?;
        entries.push(BilingualEntry::new(source, target, line)?);
    }
    Ok(entries)
}

/// Assigns printable, collision-free names to variables within one
/// rendered unit (a statement, a bag, an edge).
#[derive(Default)]
pub struct Namer {
    names: HashMap<u32, String>,
    used: HashSet<String>,
}

impl Namer {
    pub fn new() -> Self {
        Namer::default()
    }

    pub fn name(&mut self, v: &Var) -> &str {
        if !self.names.contains_key(&v.id()) {
            let base = v.name();
            let mut candidate = if base == "_" {
                "_1".to_string()
            } else {
                base.to_string()
            };
            let mut k = 1;
            while self.used.contains(&candidate) {
                k += 1;
                candidate = if base == "_" {
                    format!("_{k}")
                } else {
                    format!("{base}{k}")
                };
            }
            self.used.insert(candidate.clone());
            self.names.insert(v.id(), candidate);
        }
        &self.names[&v.id()]
    }

    pub fn category(&mut self, c: &Category) -> String {
        let mut s = c.functor.to_string();
        let l = &c.indices;
        if l.items.is_empty() && l.tail.is_none() {
            return s;
        }
        s.push('(');
        for (i, t) in l.items.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            match t {
                IndexTerm::Atom(a) => s.push_str(a),
                IndexTerm::Var(v) => s.push_str(self.name(v)),
            }
        }
        if let Some(v) = &l.tail {
            s.push('|');
            s.push_str(self.name(v));
        }
        s.push(')');
        s
    }

    pub fn sign(&mut self, sign: &Sign) -> String {
        format!(
            "{} [{}]",
            self.category(&sign.category),
            render_words(&sign.phon)
        )
    }
}

fn quote(w: &str) -> String {
    let mut s = String::with_capacity(w.len() + 2);
    s.push('"');
    for c in w.chars() {
        if c == '"' || c == '\\' {
            s.push('\\');
        }
        s.push(c);
    }
    s.push('"');
    s
}

/// `"a", "b"`
pub fn render_words(words: &[Name]) -> String {
    words
        .iter()
        .map(|w| quote(w))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_category(c: &Category) -> String {
    Namer::new().category(c)
}

/// `np(m) ["Marie"]`
pub fn render_sign(s: &Sign) -> String {
    Namer::new().sign(s)
}

pub fn render_rule(r: &Rule) -> String {
    let mut n = Namer::new();
    let lhs = n.category(&r.lhs);
    match &r.body {
        RuleBody::Phrasal(rhs) => {
            let rhs: Vec<String> = rhs.iter().map(|c| n.category(c)).collect();
            format!("rule {lhs} -> {}.", rhs.join(" "))
        }
        RuleBody::Lexical(ws) => {
            let ws: Vec<String> = ws.iter().map(|w| quote(w)).collect();
            format!("lex {lhs} -> {}.", ws.join(" "))
        }
    }
}

pub fn render_grammar(g: &Grammar) -> String {
    let mut out = format!("start {}.\n", g.start());
    for r in g.rules() {
        out.push_str(&render_rule(r));
        out.push('\n');
    }
    out
}

/// One sign per line; variables share one naming scope, as when loading.
pub fn render_bag(b: &Bag) -> String {
    let mut n = Namer::new();
    b.signs().iter().map(|s| n.sign(s) + "\n").collect()
}

pub fn render_entry(e: &BilingualEntry) -> String {
    let mut n = Namer::new();
    let src: Vec<String> = e.source.iter().map(|s| n.sign(s)).collect();
    let tgt: Vec<String> = e.target.iter().map(|s| n.sign(s)).collect();
    format!("xfer {{ {} }} => {{ {} }}.", src.join(", "), tgt.join(", "))
}

pub fn render_bilingual(entries: &[BilingualEntry]) -> String {
    entries.iter().map(|e| render_entry(e) + "\n").collect()
}
