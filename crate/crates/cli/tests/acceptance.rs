//! Acceptance checks, one line of output per criterion.

use std::collections::{BTreeSet, HashMap};
use std::fs;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::collection::btree_set;
use proptest::test_runner::{Config, TestRunner};
use sbgen::bench::{family_bag, family_grammar, run_one, BenchArgs, BenchMode};
use sbgen_core::generator::combine;
use sbgen_core::parser::{extract_bag, leaves_cover_bag, tokenize};
use sbgen_core::term::{alpha_equal, Name};
use sbgen_core::{
    generate, load_bag, load_bilingual, load_grammar, oracle_generate_all, parse, transfer, Bag,
    Category, Edge, GenConfig, GenSession, Grammar, NodeSet, OracleConfig, ParseConfig, VarGen,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(rel)
}

fn grammar(rel: &str) -> Grammar {
    load_grammar(&fs::read_to_string(fixture(rel)).unwrap()).unwrap()
}

fn bag(rel: &str) -> Bag {
    load_bag(&fs::read_to_string(fixture(rel)).unwrap()).unwrap()
}

fn oracle_bags() -> Vec<(String, Bag)> {
    let mut paths: Vec<PathBuf> = fs::read_dir(fixture("oracle"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "sbb"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            (
                p.file_stem().unwrap().to_string_lossy().into_owned(),
                load_bag(&fs::read_to_string(p).unwrap()).unwrap(),
            )
        })
        .collect()
}

fn joined(s: &[Name]) -> String {
    s.iter().map(|w| w.as_ref()).collect::<Vec<_>>().join(" ")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn sbgen(args: &[&str], env: &[(&str, &str)]) -> (Option<i32>, String, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sbgen"));
    cmd.args(args).env_remove("SBGEN_MAX_EDGES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let o = cmd.output().expect("run sbgen");
    (
        o.status.code(),
        String::from_utf8_lossy(&o.stdout).into_owned(),
        String::from_utf8_lossy(&o.stderr).into_owned(),
    )
}

/// Target bags reached from the English fixtures, with the grammar to
/// generate them under.
fn translated_bags() -> Vec<(String, Bag, &'static str)> {
    let en = grammar("en.sbg");
    let lex = load_bilingual(&fs::read_to_string(fixture("en-fr.sbx")).unwrap()).unwrap();
    let mut out = Vec::new();
    for (sentence, target) in [
        ("John loves Mary", "fr.sbg"),
        ("Mary loves John", "fr.sbg"),
        ("John likes Mary", "fr-ext.sbg"),
    ] {
        let p = parse(&tokenize(sentence), &en, &ParseConfig::default()).unwrap();
        for i in 0..p.len() {
            for t in transfer(&extract_bag(&p, i).unwrap(), &lex)
                .unwrap()
                .results
            {
                out.push((sentence.to_string(), t.bag, target));
            }
        }
    }
    out
}

/// Every (name, bag, grammar) the generator is run on in this suite.
fn all_fixtures() -> Vec<(String, Bag, Grammar)> {
    let mut out = vec![("jam".to_string(), bag("jam.sbb"), grammar("fr.sbg"))];
    let og = grammar("oracle/grammar.sbg");
    out.extend(oracle_bags().into_iter().map(|(n, b)| (n, b, og.clone())));
    out.extend(
        translated_bags()
            .into_iter()
            .map(|(n, b, g)| (n, b, grammar(g))),
    );
    out.extend((3..=11).map(|k| (format!("family-{k}"), family_bag(k), family_grammar())));
    out
}

fn worked_example() -> Check {
    let t0 = Instant::now();
    let g = grammar("fr.sbg");
    let b = bag("jam.sbb");
    let mut s = GenSession::new(&g, &b, GenConfig::default()).map_err(|e| e.to_string())?;
    let initial: Vec<String> = s.agenda().iter().map(|e| e.to_string()).collect();
    let want_initial = [
        r#"<{1}, np(m) ["Marie"] -> .>"#,
        r#"<{2}, np(j) ["Jean"] -> .>"#,
        r#"<{3}, v(j,m,l) ["aime"] -> .>"#,
    ];
    ensure(initial == want_initial, || {
        format!("initial edges {initial:?}")
    })?;

    let mut processed: Vec<Edge> = Vec::new();
    while let Some(step) = s.step().map_err(|e| e.to_string())? {
        processed.push(step.edge);
    }
    let words = |ws: &[&str]| ws.iter().map(|w| Name::from(*w)).collect::<Vec<_>>();
    let g1 = |f: &str, a: &[&str]| Category::ground(f, a);
    let with_p = |f: &str, x: &str, p: u32| {
        Category::new(
            f,
            sbgen_core::IndexList::open(
                vec![sbgen_core::IndexTerm::atom(x)],
                sbgen_core::Var::new(p, "P"),
            ),
        )
    };
    let edge = |nodes: &[usize],
                lhs: Category,
                phrase: &[&str],
                found: Vec<Category>,
                remaining: Vec<Category>| Edge {
        nodes: NodeSet::encode(nodes.iter().copied()).unwrap(),
        lhs,
        phrase: words(phrase),
        found,
        remaining,
    };
    let expected = [
        edge(&[1], g1("np", &["m"]), &["Marie"], vec![], vec![]),
        edge(&[2], g1("np", &["j"]), &["Jean"], vec![], vec![]),
        edge(&[3], g1("v", &["j", "m", "l"]), &["aime"], vec![], vec![]),
        edge(
            &[1],
            g1("np", &["m"]),
            &["Marie"],
            vec![g1("np", &["m"])],
            vec![],
        ),
        edge(
            &[2],
            g1("np", &["j"]),
            &["Jean"],
            vec![g1("np", &["j"])],
            vec![],
        ),
        edge(
            &[3],
            g1("v", &["j", "m", "l"]),
            &["aime"],
            vec![g1("v", &["j", "m", "l"])],
            vec![],
        ),
        edge(
            &[1],
            with_p("s", "m", 9001),
            &["Marie"],
            vec![g1("np", &["m"])],
            vec![with_p("vp", "m", 9001)],
        ),
        edge(
            &[2],
            with_p("s", "j", 9002),
            &["Jean"],
            vec![g1("np", &["j"])],
            vec![with_p("vp", "j", 9002)],
        ),
        edge(
            &[3],
            g1("vp", &["j", "m", "l"]),
            &["aime"],
            vec![g1("v", &["j", "m", "l"])],
            vec![g1("np", &["m"])],
        ),
        edge(
            &[1, 3],
            g1("vp", &["j", "m", "l"]),
            &["aime", "Marie"],
            vec![g1("v", &["j", "m", "l"]), g1("np", &["m"])],
            vec![],
        ),
        edge(
            &[1, 2, 3],
            g1("s", &["j", "m", "l"]),
            &["Jean", "aime", "Marie"],
            vec![g1("np", &["j"]), g1("vp", &["j", "m", "l"])],
            vec![],
        ),
    ];
    ensure(processed.len() == 11, || {
        format!("{} chart edges, expected 11", processed.len())
    })?;
    for (i, (got, want)) in processed.iter().zip(&expected).enumerate() {
        ensure(alpha_equal(got, want), || {
            format!("edge {} is {got}, expected {want}", i + 1)
        })?;
    }
    let mut vars = VarGen::new();
    for e in &processed {
        vars.reserve_for(e);
    }
    ensure(
        combine(&processed[8], &processed[4], &mut vars).is_none(),
        || "vp over aime combined with Jean".into(),
    )?;
    ensure(
        combine(&processed[6], &processed[9], &mut vars).is_none(),
        || "Marie-subject s combined with vp(j,m,l)".into(),
    )?;
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(1), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "11 edges in the expected order, both index clashes blocked, {elapsed:?}"
    ))
}

fn pipeline() -> Check {
    let (code, out, err) = sbgen(
        &[
            "translate",
            &fixture("en.sbg").to_string_lossy(),
            &fixture("fr.sbg").to_string_lossy(),
            &fixture("en-fr.sbx").to_string_lossy(),
            "John",
            "loves",
            "Mary",
        ],
        &[],
    );
    ensure(code == Some(0), || format!("exit {code:?}: {err}"))?;
    ensure(out == "Jean aime Marie\n", || format!("output {out:?}"))?;
    ensure(!out.contains("Marie aime Jean"), || {
        "produced Marie aime Jean".into()
    })?;
    Ok("exactly `Jean aime Marie`".into())
}

fn index_reversal() -> Check {
    let bags = translated_bags();
    let (_, b, _) = bags
        .iter()
        .find(|(s, _, _)| s == "John likes Mary")
        .ok_or("no transfer for likes")?;
    let plait = b
        .signs()
        .iter()
        .find(|s| s.phon[0].as_ref() == "plaît")
        .ok_or("no plaît sign")?;
    ensure(
        plait.category == Category::ground("v", &["m", "j", "e"]),
        || format!("plaît carries {}", plait.category),
    )?;
    let (code, out, err) = sbgen(
        &[
            "translate",
            &fixture("en.sbg").to_string_lossy(),
            &fixture("fr-ext.sbg").to_string_lossy(),
            &fixture("en-fr.sbx").to_string_lossy(),
            "John likes Mary",
        ],
        &[],
    );
    ensure(code == Some(0) && out == "Marie plaît à Jean\n", || {
        format!("exit {code:?}, output {out:?} {err}")
    })?;
    Ok("plaît(m,j,e); `Marie plaît à Jean`".into())
}

fn oracle_equivalence() -> Check {
    let t0 = Instant::now();
    let g = grammar("oracle/grammar.sbg");
    let bags = oracle_bags();
    ensure(bags.len() >= 20, || format!("only {} bags", bags.len()))?;
    let mut empty = 0;
    for (name, b) in &bags {
        ensure((3..=7).contains(&b.len()), || {
            format!("{name} has size {}", b.len())
        })?;
        let chart: BTreeSet<String> = generate(b, &g, GenConfig::default())
            .map_err(|e| e.to_string())?
            .sentences
            .iter()
            .map(|s| joined(s))
            .collect();
        let oracle: BTreeSet<String> = oracle_generate_all(b, &g, &OracleConfig::default())
            .map_err(|e| format!("{name}: {e}"))?
            .sentences
            .iter()
            .map(|s| joined(s))
            .collect();
        ensure(chart == oracle, || {
            format!("{name}: chart {chart:?} oracle {oracle:?}")
        })?;
        empty += chart.is_empty() as usize;
    }
    let elapsed = t0.elapsed();
    ensure(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!(
        "{} bags ({empty} unsatisfiable) agree, {elapsed:?}",
        bags.len()
    ))
}

fn reparse() -> Check {
    let mut checked = 0;
    for (name, b, g) in all_fixtures() {
        for s in generate(&b, &g, GenConfig::default())
            .map_err(|e| e.to_string())?
            .sentences
        {
            let p = parse(&s, &g, &ParseConfig::default()).map_err(|e| format!("{name}: {e}"))?;
            ensure(
                p.analyses.iter().any(|a| leaves_cover_bag(&a.leaves, &b)),
                || format!("{name}: `{}` does not re-parse over its bag", joined(&s)),
            )?;
            checked += 1;
        }
    }
    Ok(format!("{checked}/{checked} sentences re-parse"))
}

fn bitstrings() -> Check {
    const CASES: u32 = 10_000;
    let mut runner = TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    });
    let set = || btree_set(1..=20usize, 0..=20);
    let enc = |s: &BTreeSet<usize>| NodeSet::encode(s.iter().copied()).unwrap();
    runner
        .run(&(set(), set()), |(a, b)| {
            let (x, y) = (enc(&a), enc(&b));
            proptest::prop_assert_eq!(x.bits(), a.iter().map(|i| 1u64 << (i - 1)).sum::<u64>());
            proptest::prop_assert_eq!(x.union(y), enc(&a.union(&b).copied().collect()));
            proptest::prop_assert_eq!(x.is_disjoint(y), a.is_disjoint(&b));
            proptest::prop_assert_eq!(x.positions().collect::<BTreeSet<_>>(), a);
            Ok(())
        })
        .map_err(|e| e.to_string())?;
    let a = NodeSet::encode([2, 4, 5]).unwrap().bits();
    let b = NodeSet::encode([1, 2, 3]).unwrap().bits();
    ensure(a == 26 && b == 7, || format!("anchors {a}, {b}"))?;
    Ok(format!(
        "{CASES} random pairs; {{2,4,5}} = 26, {{1,2,3}} = 7"
    ))
}

fn uniqueness() -> Check {
    let mut runs = 0;
    for (name, b, g) in all_fixtures() {
        let mut s = GenSession::new(&g, &b, GenConfig::default()).map_err(|e| e.to_string())?;
        while s.step().map_err(|e| e.to_string())?.is_some() {}
        let d = s.duplicate_pairs();
        ensure(d.is_empty(), || {
            format!("{name}: {} duplicate pairs, e.g. {}", d.len(), d[0].0)
        })?;
        runs += 1;
    }
    Ok(format!("0 duplicates over {runs} fixtures"))
}

fn performance() -> Check {
    let args = BenchArgs::default();
    let mut chart_all = HashMap::new();
    let mut base_all = HashMap::new();
    for k in 3..=11 {
        let c = run_one(k, BenchMode::ChartAll, &args);
        let b = run_one(k, BenchMode::BaselineAll, &args);
        ensure(c.sentences == 1 && b.sentences == 1, || {
            format!("size {k}: sentences {} vs {}", c.sentences, b.sentences)
        })?;
        chart_all.insert(k, c.expansions);
        base_all.insert(k, b.expansions);
    }
    for k in 4..=11 {
        ensure(base_all[&k] > base_all[&(k - 1)], || {
            format!("baseline expansions not increasing at {k}: {base_all:?}")
        })?;
    }
    for k in 5..=11 {
        ensure(base_all[&k] > chart_all[&k], || {
            format!(
                "size {k}: baseline {} <= chart {}",
                base_all[&k], chart_all[&k]
            )
        })?;
    }
    // best of five to damp scheduler noise
    let best = |mode| {
        (0..5)
            .map(|_| run_one(11, mode, &args).seconds)
            .fold(f64::INFINITY, f64::min)
    };
    let (c11, b11) = (best(BenchMode::ChartAll), best(BenchMode::BaselineAll));
    ensure(c11 < b11, || {
        format!("size 11: chart-all {c11}s, baseline-all {b11}s")
    })?;
    let first = run_one(11, BenchMode::ChartFirst, &args);
    ensure(first.sentences == 1 && first.seconds < 5.0, || {
        format!("chart-first at 11: {first:?}")
    })?;
    Ok(format!(
        "size 11: chart-all {c11:.6}s ({} edges) vs baseline-all {b11:.6}s ({} expansions); chart-first {:.6}s",
        chart_all[&11], base_all[&11], first.seconds
    ))
}

fn termination() -> Check {
    let g = fixture("cyclic.sbg").to_string_lossy().into_owned();
    let b = fixture("cyclic.sbb").to_string_lossy().into_owned();
    let (code, _, err) = sbgen(
        &["generate", &g, &b, "--no-redundancy-check"],
        &[("SBGEN_MAX_EDGES", "50000")],
    );
    ensure(code == Some(3), || {
        format!("without check: exit {code:?} {err}")
    })?;
    let (code, out, err) = sbgen(&["generate", &g, &b], &[]);
    ensure(code == Some(0) && out == "w\n", || {
        format!("with check: exit {code:?} {out:?} {err}")
    })?;
    Ok("budget trips (exit 3) without the check; terminates with it".into())
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("worked example", worked_example),
        ("translation pipeline", pipeline),
        ("index reversal", index_reversal),
        ("oracle equivalence", oracle_equivalence),
        ("re-parse soundness", reparse),
        ("bitstring laws", bitstrings),
        ("hypothesis uniqueness", uniqueness),
        ("performance shape", performance),
        ("termination guard", termination),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match std::panic::catch_unwind(check) {
            Ok(Ok(detail)) => println!("criterion {} {name}: PASS ({detail})", i + 1),
            Ok(Err(why)) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({why})", i + 1);
            }
            Err(_) => {
                failed += 1;
                println!("criterion {} {name}: FAIL (panicked)", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
