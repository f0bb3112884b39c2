//! Replays the checked-in fuzz corpus through the fuzz harness.

use std::path::Path;

mod harness {
    include!("../../../fuzz/src/harness.rs");
}

fn replay(target: &str, run: fn(&[u8])) -> usize {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut count = 0;
    let mut entries: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    for path in entries {
        run(&std::fs::read(&path).unwrap());
        count += 1;
    }
    count
}

type Target = fn(&[u8]);

#[test]
fn corpus_seeds_do_not_panic() {
    let targets: [(&str, Target); 6] = [
        ("parse_context", harness::parse_context),
        ("parse_report", harness::parse_report),
        ("parse_spin", harness::parse_spin_text),
        ("build_group", harness::build_group),
        ("build_action", harness::build_action),
        ("generate_permutation_group", harness::generate_group),
    ];
    for (name, run) in targets {
        assert!(replay(name, run) >= 2, "{name} needs seeds");
    }
}

#[test]
fn degenerate_inputs() {
    for data in [&[][..], &[0xff], &[0, 0, 0], b"{}", b"\xff\xfe"] {
        harness::parse_context(data);
        harness::parse_report(data);
        harness::parse_spin_text(data);
        harness::build_group(data);
        harness::build_action(data);
        harness::generate_group(data);
    }
}

proptest::proptest! {
    #![proptest_config(proptest::prelude::ProptestConfig::with_cases(512))]

    #[test]
    fn random_bytes_do_not_panic(data in proptest::collection::vec(proptest::prelude::any::<u8>(), 0..96)) {
        harness::parse_report(&data);
        harness::parse_spin_text(&data);
        harness::build_group(&data);
        harness::build_action(&data);
        harness::generate_group(&data);
    }

    #[test]
    fn structured_tables_do_not_panic(n in 0u8..8, cells in proptest::collection::vec(0u8..8, 64)) {
        let mut data = vec![n];
        data.extend(cells);
        harness::build_group(&data);
    }
}
