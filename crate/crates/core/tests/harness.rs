use andreadakis::harness::{emit_tables, replay_sample, run_verification, Target, Verdict, VerificationConfig};

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(f)
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    for target in [Target::Triangular, Target::Braid, Target::Dk, Target::StrongCentrality] {
        let cfg = VerificationConfig::new(target, 3, 5, 24, 99);
        let serial = with_threads(1, || run_verification(&cfg).unwrap().to_json());
        let parallel = with_threads(4, || run_verification(&cfg).unwrap().to_json());
        assert_eq!(serial, parallel, "{target}");
    }
}

#[test]
fn every_record_replays() {
    let cfg = VerificationConfig::new(Target::Disjointness, 4, 5, 16, 5);
    let report = run_verification(&cfg).unwrap();
    for rec in &report.records {
        assert_eq!(&replay_sample(&cfg, rec.index).unwrap(), rec);
    }
}

#[test]
fn counts_are_consistent() {
    let cfg = VerificationConfig::new(Target::Mccool, 4, 5, 40, 8);
    let report = run_verification(&cfg).unwrap();
    assert_eq!(report.passed + report.failed + report.indeterminate, 40);
    assert_eq!(report.verdict == Verdict::Fail, report.failed > 0);
    assert_eq!(report.records.len(), 40);
}

#[test]
fn invalid_configs_are_rejected() {
    let mut cfg = VerificationConfig::new(Target::Disjointness, 2, 5, 10, 0);
    assert!(run_verification(&cfg).is_err());
    cfg.n = 3;
    cfg.length_budget = 0;
    assert!(run_verification(&cfg).is_err());
}

#[test]
fn json_keys_are_sorted() {
    let json = run_verification(&VerificationConfig::new(Target::WordLemma, 3, 6, 2, 1))
        .unwrap()
        .to_json();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(json.find("\"config\"").unwrap() < json.find("\"verdict\": \"pass\"").unwrap());
}

#[test]
fn dimension_tables() {
    let t = emit_tables(2..=4, 1..=6);
    assert!(t.enumeration_agrees);
    assert_eq!(t.witt[1], vec![3, 3, 8, 18, 48, 116]);
    assert_eq!(t.dk[2], vec![6, 4, 10, 21, 54, 125]);
}
