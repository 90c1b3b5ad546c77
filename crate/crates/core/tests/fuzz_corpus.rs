//! Replays the fuzz corpus seeds through the same properties the fuzz
//! targets assert.

use std::path::PathBuf;

use lambda_holonomy::cli::{parse_sweep_spec, parse_synth_config, run_synth};
use lambda_holonomy::gate::AxisLabel;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn sweep_spec_seeds() {
    let mut accepted = 0;
    for (path, text) in seeds("parse_sweep_spec") {
        if let Ok(spec) = parse_sweep_spec(&text) {
            accepted += 1;
            let again = parse_sweep_spec(&serde_json::to_string(&spec).unwrap()).unwrap();
            assert_eq!(spec, again, "{}", path.display());
            assert_eq!(*spec.range.points().last().unwrap(), spec.range.stop);
        }
    }
    assert!(accepted > 0);
}

#[test]
fn synth_config_seeds() {
    let mut accepted = 0;
    for (path, text) in seeds("parse_synth_config") {
        if let Ok(cfg) = parse_synth_config(&text) {
            accepted += 1;
            let again = parse_synth_config(&serde_json::to_string(&cfg).unwrap()).unwrap();
            assert_eq!(cfg, again, "{}", path.display());
            let _ = run_synth(&cfg);
        }
    }
    assert!(accepted > 0);
}

#[test]
fn axis_label_seeds() {
    for (_, text) in seeds("axis_label") {
        if let Ok(label) = text.parse::<AxisLabel>() {
            assert_eq!(format!("{label:?}").parse::<AxisLabel>().unwrap(), label);
        }
    }
}

mod mutated {
    use super::*;
    use proptest::prelude::*;

    fn mutate(text: &str, at: usize, len: usize, insert: &str) -> String {
        let chars: Vec<char> = text.chars().collect();
        let at = at % (chars.len() + 1);
        let end = (at + len).min(chars.len());
        chars[..at]
            .iter()
            .chain(insert.chars().collect::<Vec<_>>().iter())
            .chain(chars[end..].iter())
            .collect()
    }

    proptest! {
        #[test]
        fn parsers_never_panic(
            which in 0usize..8, at in 0usize..400, len in 0usize..6,
            insert in r#"[-0-9.eE{}\[\]":, a-z_]{0,8}"#,
        ) {
            let sweep = seeds("parse_sweep_spec");
            let synth = seeds("parse_synth_config");
            let all: Vec<&String> = sweep.iter().chain(synth.iter()).map(|(_, t)| t).collect();
            let text = mutate(all[which % all.len()], at, len, &insert);
            if let Ok(spec) = parse_sweep_spec(&text) {
                prop_assert_eq!(&parse_sweep_spec(&serde_json::to_string(&spec).unwrap()).unwrap(), &spec);
            }
            if let Ok(cfg) = parse_synth_config(&text) {
                prop_assert_eq!(parse_synth_config(&serde_json::to_string(&cfg).unwrap()).unwrap(), cfg);
                let _ = run_synth(&cfg);
            }
        }
    }
}
