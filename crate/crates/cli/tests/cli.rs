use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_colortrack")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value(text: &str, key: &str) -> f64 {
    let line = text.lines().find(|l| l.starts_with(&format!("{key}:"))).unwrap_or_else(|| panic!("no {key} in\n{text}"));
    line.split(':').nth(1).unwrap().trim().parse().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn design_prints_gains() {
    let o = run(&["design", "--k", "1", "--tau", "1", "--ts", "4", "--po", "4.32139"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!((value(&out, "kp") - 1.0).abs() < 1e-5);
    assert!((value(&out, "ki") - 2.0).abs() < 1e-4);
    assert_eq!(value(&out, "dc_gain"), 1.0);
}

#[test]
fn design_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("d.csv");
    let o = run(&["design", "--k", "2", "--tau", "0.5", "--ts", "2", "--po", "10", "--csv", p(&csv)]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("k,tau,ts,po,kp,ki"));
    assert!(lines.next().unwrap().starts_with("2,0.5,2,10,0.5,"));
}

#[test]
fn infeasible_design_fails_with_message() {
    let o = run(&["design", "--k", "1", "--tau", "0.1", "--ts", "1.6", "--po", "5"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("infeasible"));
}

#[test]
fn track_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.cfg");
    std::fs::write(&cfg, "# corner start\nkind = step_track\nseed = 42\nduration = 3\n").unwrap();
    let mut outputs = Vec::new();
    for i in 0..2 {
        let csv = dir.path().join(format!("t{i}.csv"));
        let report = dir.path().join(format!("r{i}.txt"));
        let o = run(&["track", "--config", p(&cfg), "--csv", p(&csv), "--report", p(&report)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push((std::fs::read(&csv).unwrap(), std::fs::read(&report).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    let csv = String::from_utf8(outputs[0].0.clone()).unwrap();
    assert!(csv.starts_with("t,ex,ey,ux,uy,pan,tilt,cx,cy,found\n"));
    assert_eq!(csv.lines().count(), 1 + 33);
}

#[test]
fn track_rejects_bad_settings() {
    let o = run(&["track", "--set", "no_such_key=1"]);
    assert!(!o.status.success());
    let o = run(&["track", "--set", "ts=-1"]);
    assert!(!o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.cfg");
    std::fs::write(&cfg, "kind = step_track\nthis line has no equals\n").unwrap();
    let o = run(&["track", "--config", p(&cfg)]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let o = run(&["track", "--config", p(&dir.path().join("missing.cfg"))]);
    assert!(!o.status.success());
}

#[test]
fn clock_reports_radius() {
    let o = run(&["clock", "--revolutions", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!((value(&out, "mean_radius_px") - 87.57).abs() < 2.0);
    assert!(value(&out, "radius_std_px") < 4.0);
}

#[test]
fn sweep_prints_table() {
    let o = run(&["sweep"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("level,chroma_pixels,rgb_pixels,chroma_retained,rgb_retained\n"));
    assert_eq!(out.lines().count(), 5);
}

#[test]
fn render_then_segment_finds_the_object() {
    let dir = tempfile::tempdir().unwrap();
    let ppm = dir.path().join("f.ppm");
    let raw = dir.path().join("f.rgb565");
    let pbm = dir.path().join("m.pbm");
    let words = dir.path().join("m.bin");
    let csv = dir.path().join("r.csv");
    let set = ["--set", "object_az=0", "--set", "object_el=0", "--set", "object_size=2.5"];
    assert!(run(&[&["render", "-o", p(&ppm)], &set[..]].concat()).status.success());
    assert!(run(&[&["render", "-o", p(&raw)], &set[..]].concat()).status.success());
    assert_eq!(std::fs::metadata(&raw).unwrap().len(), 320 * 240 * 2);

    for input in [vec![p(&ppm)], vec![p(&raw), "--width", "320", "--height", "240"]] {
        let mut args = vec!["segment"];
        args.extend(input);
        args.extend(["--pick", "235,120,30", "--mask", p(&pbm), "--words", p(&words), "--csv", p(&csv)]);
        let o = run(&args);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("center (160, 120)") || stdout(&o).contains("center (159, 119)"), "{}", stdout(&o));
        assert_eq!(std::fs::metadata(&words).unwrap().len(), 2400 * 4);
        assert!(std::fs::read(&pbm).unwrap().starts_with(b"P4\n320 240\n"));
        assert!(std::fs::read_to_string(&csv).unwrap().lines().count() == 2);
    }
}

#[test]
fn segment_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.ppm");
    std::fs::write(&bad, b"P3\n1 1\n255\n0 0 0\n").unwrap();
    assert!(!run(&["segment", p(&bad), "--pick", "1,2,3"]).status.success());
    let raw = dir.path().join("x.rgb565");
    std::fs::write(&raw, [0u8; 6]).unwrap();
    assert!(!run(&["segment", p(&raw), "--pick", "1,2,3"]).status.success());
    assert!(!run(&["segment", p(&raw), "--width", "4", "--height", "4", "--pick", "1,2,3"]).status.success());
    assert!(!run(&["segment", p(&raw), "--width", "3", "--height", "1", "--pick", "0,0,0"]).status.success());
    assert!(!run(&["segment", p(&raw), "--width", "3", "--height", "1", "--pick-xy", "9,9"]).status.success());
}

#[test]
fn bench_checks_oracle() {
    let o = run(&["bench", "--iterations", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("oracle_match: true"));
    assert!(value(&out, "chroma_pixels_per_s") > 0.0);
}

#[test]
fn track_dispatches_other_kinds() {
    let o = run(&["track", "--set", "kind=multi_object"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().skip(1).all(|l| l.ends_with(",true")));
}
