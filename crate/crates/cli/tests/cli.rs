//! Drives the `wfmaxwell` binary end to end.

use std::path::Path;
use std::process::{Command, Output};

fn wfmaxwell(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wfmaxwell"))
        .args(args)
        .current_dir(cwd)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mesh_refine_assemble_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let o = wfmaxwell(&["mesh", "--n", "1", "--domain", "0,1,0,1,0,1", "--out", "m.mesh"], d);
    assert!(o.status.success(), "{o:?}");
    let text = std::fs::read_to_string(d.join("m.mesh")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "wfmesh 1");
    assert_eq!(lines[1], "8 6");
    assert_eq!(lines.len(), 2 + 8 + 6);

    let o = wfmaxwell(
        &["refine", "--in", "m.mesh", "--out", "f.mesh", "--report", "r.txt"],
        d,
    );
    assert!(o.status.success(), "{o:?}");
    let fine = std::fs::read_to_string(d.join("f.mesh")).unwrap();
    assert_eq!(fine.lines().nth(1), Some("32 72"));
    let report = std::fs::read_to_string(d.join("r.txt")).unwrap();
    assert!(report.contains("passed: true"));
    assert!(report.contains("conforming: true"));

    let o = wfmaxwell(
        &["assemble", "--mesh", "f.mesh", "--degree", "2", "--out-k", "k.coo", "--out-m", "mm.coo"],
        d,
    );
    assert!(o.status.success(), "{o:?}");
    for name in ["k.coo", "mm.coo"] {
        let coo = std::fs::read_to_string(d.join(name)).unwrap();
        let entries: Vec<(usize, usize)> = coo
            .lines()
            .map(|l| {
                let f: Vec<&str> = l.split(' ').collect();
                assert_eq!(f.len(), 3);
                f[2].parse::<f64>().unwrap();
                (f[0].parse().unwrap(), f[1].parse().unwrap())
            })
            .collect();
        assert!(entries.iter().all(|(i, j)| i <= j), "upper triangle only");
        assert!(entries.windows(2).all(|w| w[0] < w[1]), "sorted by (i, j)");
    }
}

#[test]
fn spectrum_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = wfmaxwell(&["spectrum", "--n", "2", "--degree", "1", "--refine", "none"], dir.path());
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,lambda_h,lambda_exact,abs_error");
    assert_eq!(*lines.last().unwrap(), "zero_count,0");
    assert_eq!(lines.len(), 11);
}

#[test]
fn spectrum_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["spectrum", "--n", "2", "--degree", "1", "--refine", "wf"];
    let a = wfmaxwell(&args, dir.path());
    let b = wfmaxwell(&args, dir.path());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn experiment_with_config_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("s.cfg"), "n = 1\ndegree = 2\nrefine = none\n").unwrap();
    let o = wfmaxwell(
        &["experiment", "--config", "s.cfg", "--n", "1,2", "--degree", "1", "--out", "out"],
        d,
    );
    assert!(o.status.success(), "{o:?}");
    let summary = stdout(&o);
    assert!(summary.contains("degree: 1"));
    assert!(summary.contains("[n = 2]"));
    for f in ["spectrum_n1.csv", "spectrum_n2.csv", "rates.csv", "summary.txt"] {
        assert!(d.join("out").join(f).exists(), "{f}");
    }
    let rates = std::fs::read_to_string(d.join("out/rates.csv")).unwrap();
    assert_eq!(rates.lines().count(), 3);
}

#[test]
fn rates_from_a_reference_error_column() {
    let dir = tempfile::tempdir().unwrap();
    let o = wfmaxwell(
        &[
            "rates",
            "--h",
            "pi/5,pi/6,pi/7,pi/8,pi/9",
            "--err",
            "1.95e-4,1.21e-4,7.40e-5,4.64e-5,3.03e-5",
        ],
        dir.path(),
    );
    assert!(o.status.success(), "{o:?}");
    let out = stdout(&o);
    let rates: Vec<f64> = out
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(rates.len(), 4);
    // Rates of the error column rounded to three digits; the third is 3.4955,
    // not 3.48.
    for (r, want) in rates.iter().zip([2.6174, 3.1899, 3.4955, 3.6181]) {
        assert!((r - want).abs() < 5e-4, "{r} vs {want}");
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let code = |args: &[&str]| wfmaxwell(args, d).status.code();
    assert_eq!(code(&["spectrum", "--n", "2", "--degree", "2", "--dense-cap", "100"]), Some(3));
    assert_eq!(code(&["spectrum", "--n", "2", "--degree", "9"]), Some(2));
    assert_eq!(code(&["spectrum", "--bc", "sideways"]), Some(2));
    assert_eq!(code(&["mesh", "--n", "1", "--domain", "0,1,0,1", "--out", "x"]), Some(2));
    assert_eq!(code(&["rates", "--h", "1,0.5", "--err", "1e-3"]), Some(2));
    assert_eq!(code(&["refine", "--in", "missing.mesh", "--out", "y"]), Some(1));
    std::fs::write(d.join("bad.mesh"), "wfmesh 1\n4 1\n0 0 0\n").unwrap();
    assert_eq!(code(&["refine", "--in", "bad.mesh", "--out", "y"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
}
