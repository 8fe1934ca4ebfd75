use std::process::Command;

fn fglab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fglab")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into(), String::from_utf8_lossy(&out.stderr).into())
}

#[test]
fn construct_echoes_the_multiplicative_law() {
    let (code, out, _) = fglab(&["construct", "--group", "multiplicative", "--p", "5"]);
    assert_eq!(code, 0);
    assert!(out.contains("F = X + Y + XY\n"), "{out}");
}

#[test]
fn matrices_pass() {
    let (code, out, _) = fglab(&["matrices"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("matrices.commutant"));
}

#[test]
fn infeasible_and_bad_configs_exit_2() {
    let (code, _, err) = fglab(&["verify", "--p", "3", "--f", "2", "--d", "2", "--N", "12"]);
    assert_eq!(code, 2);
    assert!(err.contains("dcap"), "{err}");
    assert_eq!(fglab(&["torsion", "--p", "4"]).0, 2);
    assert_eq!(fglab(&["torsion", "--group", "nonsense"]).0, 2);
}

#[test]
fn config_file_and_flag_override() {
    let dir = std::env::temp_dir().join(format!("fglab_cli_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    let out = dir.join("report.json");
    std::fs::write(&cfg, "# torsion over Z_5\np = 5\nN = 3\nnmax = 1\ngroup = honda\n").unwrap();
    let (code, stdout, err) = fglab(&["torsion", "--config", cfg.to_str().unwrap(), "--group", "lubin_tate", "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}{err}");
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    for k in ["schema_version", "config", "checks", "summary", "timings"] {
        assert!(v.get(k).is_some(), "missing {k}");
    }
    assert_eq!(v["config"]["p"], 5);
    assert_eq!(v["config"]["group"], "lubin_tate");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["pass"] == true));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn custom_group_from_coefficient_file() {
    let dir = std::env::temp_dir().join(format!("fglab_custom_{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("p.txt");
    // 3X + 3X^2 + X^3
    std::fs::write(&path, "0 3 3 1\n").unwrap();
    let (code, out, err) = fglab(&["torsion", "--group", "custom", "--coeffs", path.to_str().unwrap(), "--nmax", "1"]);
    assert_eq!(code, 0, "{out}{err}");
    std::fs::remove_dir_all(&dir).ok();
}
