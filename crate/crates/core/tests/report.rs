use fglab::report::{parse_pairs, run, RunConfig, Suites};

fn cfg(text: &str) -> RunConfig {
    let mut c = RunConfig::default();
    c.apply(&parse_pairs(text).unwrap()).unwrap();
    c
}

#[test]
fn reports_are_byte_identical() {
    let c = cfg("group = corpus\nN = 3\nnmax = 1\nseed = 9\njobs = 3");
    let a = run(&c, Suites::ALL).unwrap();
    let b = run(&cfg("group = corpus\nN = 3\nnmax = 1\nseed = 9\njobs = 1"), Suites::ALL).unwrap();
    assert!(a.all_pass(), "{}", a.render());
    let strip_jobs = |s: String| s.replace("\"jobs\": 3", "\"jobs\": 1");
    assert_eq!(strip_jobs(a.to_json_stable()), b.to_json_stable());
}

#[test]
fn every_record_carries_its_window() {
    let r = run(&cfg("group = corpus\nN = 3\nnmax = 1"), Suites::TORSION).unwrap();
    for c in &r.checks {
        assert!(!c.statement.is_empty());
        assert!(c.error.is_none(), "{}: {:?}", c.id, c.error);
        if c.id.starts_with("torsion.assumption") {
            assert!(c.trunc > 0 && c.precision > 0);
        }
    }
}
