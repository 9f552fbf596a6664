//! Bundled configs against their checked-in reports. Set `QKIT_BLESS=1` to
//! regenerate the golden files.

mod common;

use common::*;
use std::fs;

#[test]
fn bundled_configs_match_golden_reports() {
    let bless = std::env::var_os("QKIT_BLESS").is_some();
    for (command, name) in BUNDLED {
        let out = run_config(command, &config_path(name));
        assert_eq!(
            out.status.code(),
            Some(0),
            "{name}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        let actual = normalize(&stdout(&out));
        let golden = golden_path(name);
        if bless {
            fs::write(&golden, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&golden)
            .unwrap_or_else(|e| panic!("{}: {e}; run with QKIT_BLESS=1", golden.display()));
        assert!(
            actual == expected,
            "{name}: report differs from {}",
            golden.display()
        );
    }
}

#[test]
fn golden_reports_carry_the_expected_numbers() {
    let read = |name: &str| -> serde_json::Value {
        serde_json::from_str(&fs::read_to_string(golden_path(name)).unwrap()).unwrap()
    };
    let frame = read("sea_star_frame_check");
    assert!(frame["results"]["resolution_residual"].as_f64().unwrap() <= 1e-12);

    let q = read("delta_quantize");
    let spectrum: Vec<f64> = serde_json::from_value(q["results"]["spectrum"].clone()).unwrap();
    assert_eq!(spectrum, vec![0.4, 0.0]);

    let sym = read("lower_symbol_table");
    let values = sym["results"]["lower_symbol"]["values"].as_array().unwrap();
    let expected = [
        0.4,
        0.0381966011250105,
        0.2618033988749895,
        0.2618033988749895,
        0.0381966011250105,
    ];
    for (v, e) in values.iter().zip(expected) {
        assert!((v[0].as_f64().unwrap() - e).abs() <= 1e-12);
    }

    let ev = read("harmonic_evolve");
    let last = ev["results"]["final_state"].as_array().unwrap();
    assert!((last[0].as_f64().unwrap() - 1.0).abs() <= 5e-3);
    assert!(last[1].as_f64().unwrap().abs() <= 5e-3);
    assert!(ev["results"]["max_energy_drift"].as_f64().unwrap() <= 1e-3);

    let cls = read("subspace_classify");
    assert_eq!(cls["results"]["class"], "lagrangian");
}
