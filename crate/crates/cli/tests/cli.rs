use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fraccurv::config::parse_config;
use fraccurv::output::{CURVE_HEADER, LOCALIZE_HEADER};
use fraccurv_core::geometry::scene_grid;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(format!("{name}.json"))
}

fn fraccurv(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fraccurv"))
        .args(args)
        .env("FRACCURV_CACHE_DIR", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn dim_reports_cantor_constants() {
    let tmp = tempfile::tempdir().unwrap();
    let text = stdout(&fraccurv(tmp.path(), &["dim", path_str(&fixture("cantor"))]));
    let value = |key: &str| -> f64 {
        let line = text.lines().find(|l| l.starts_with(key)).unwrap();
        line.split('=').nth(1).unwrap().trim().parse().unwrap()
    };
    assert!((value("D ") - 0.6309297536).abs() < 1e-10);
    assert!((value("eta ") - 1.0986122887).abs() < 1e-10);
    assert!(text.contains("lattice h=ln 3"), "{text}");
}

#[test]
fn curve_then_fractal_reuses_the_sweep() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = fixture("cantor");
    let curve_path = tmp.path().join("curve.csv");
    stdout(&fraccurv(
        tmp.path(),
        &["curve", path_str(&cfg), "--out", path_str(&curve_path)],
    ));
    let csv = std::fs::read_to_string(&curve_path).unwrap();
    assert!(csv.starts_with(&format!("{CURVE_HEADER}\n")));
    assert!(!csv.contains('\r'));
    assert_eq!(
        std::fs::read_dir(tmp.path()).unwrap().count(),
        2,
        "curve stored in the cache"
    );

    let table = stdout(&fraccurv(tmp.path(), &["fractal", path_str(&cfg), "-k", "1"]));
    let mut lines = table.lines();
    assert_eq!(
        lines.next().unwrap(),
        "k,method,value,scale,reference_radius,tail_bound,flags"
    );
    let mut seen = 0;
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        assert_eq!(cols[0], "1");
        let v: f64 = cols[2].parse().unwrap();
        assert!((v - 2.5247).abs() < 1e-3, "{line}");
        seen += 1;
    }
    assert_eq!(seen, 2);
}

#[test]
fn curve_rows_are_sorted_and_complete() {
    let tmp = tempfile::tempdir().unwrap();
    let text = stdout(&fraccurv(
        tmp.path(),
        &[
            "curve",
            path_str(&fixture("nonlattice")),
            "--eps-min",
            "1e-3",
            "--samples-per-decade",
            "8",
        ],
    ));
    let rows: Vec<(f64, usize)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<&str> = l.split(',').collect();
            assert_eq!(c.len(), 6);
            (c[0].parse().unwrap(), c[1].parse().unwrap())
        })
        .collect();
    assert!(!rows.is_empty());
    for w in rows.windows(2) {
        assert!(w[0].0 > w[1].0 || (w[0].0 == w[1].0 && w[0].1 < w[1].1), "{w:?}");
    }
    assert_eq!(rows.len() % 2, 0);
}

#[test]
fn outputs_are_deterministic_and_cache_is_transparent() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let cfg = fixture("gasket");
    let args = ["curve", path_str(&cfg), "--grid", "256", "--samples-per-decade", "8"];
    let fresh = stdout(&fraccurv(a.path(), &args));
    let cached = stdout(&fraccurv(a.path(), &args));
    let other = stdout(&fraccurv(b.path(), &args));
    let mut uncached_args = args.to_vec();
    uncached_args.push("--no-cache");
    let uncached = stdout(&fraccurv(b.path(), &uncached_args));
    assert_eq!(fresh, cached);
    assert_eq!(fresh, other);
    assert_eq!(fresh, uncached);
    let threaded = Command::new(env!("CARGO_BIN_EXE_fraccurv"))
        .args(&uncached_args)
        .env("RAYON_NUM_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(fresh, stdout(&threaded));

    let render = ["render", path_str(&cfg), "--grid", "256", "--eps", "0.05"];
    assert_eq!(fraccurv(a.path(), &render).stdout, fraccurv(b.path(), &render).stdout);
}

#[test]
fn render_writes_pgm_of_scene_size() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = fixture("gasket");
    let out = fraccurv(tmp.path(), &["render", path_str(&cfg), "--eps", "0.05"]);
    assert!(out.status.success());
    let bytes = out.stdout;
    let ifs = parse_config(&cfg).unwrap().build_ifs().unwrap();
    let spec = scene_grid(&ifs, 1024, 0.05).unwrap();
    assert_eq!(spec.width, 1024);
    let header = format!("P5\n{} {}\n255\n", spec.width, spec.height);
    assert!(bytes.starts_with(header.as_bytes()));
    assert_eq!(bytes.len(), header.len() + spec.width * spec.height);
    assert!(bytes[header.len()..].iter().all(|&p| p == 0 || p == 255));
    assert!(bytes[header.len()..].contains(&255));
}

#[test]
fn localize_report_has_one_row_per_cell() {
    let tmp = tempfile::tempdir().unwrap();
    let text = stdout(&fraccurv(
        tmp.path(),
        &[
            "localize",
            path_str(&fixture("gasket")),
            "--grid",
            "256",
            "--level",
            "1",
            "-k",
            "2",
            "--samples-per-decade",
            "16",
        ],
    ));
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), LOCALIZE_HEADER);
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[3].starts_with("3,complement,"));
    let total: f64 = rows
        .iter()
        .map(|r| r.split(',').nth(2).unwrap().parse::<f64>().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn check_lists_diagnostics() {
    let tmp = tempfile::tempdir().unwrap();
    let text = stdout(&fraccurv(tmp.path(), &["check", path_str(&fixture("cantor"))]));
    assert!(text.starts_with("diagnostic,k,param,value\n"));
    let bound: f64 = text
        .lines()
        .find(|l| l.starts_with("variation-bound,0,bound,"))
        .unwrap()
        .rsplit(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((bound - 2f64.powf(-(2f64.ln() / 3f64.ln()))).abs() < 1e-6);
    assert!(text.contains("omega,-,gamma,"));
}

#[test]
fn configuration_errors_exit_with_two() {
    let tmp = tempfile::tempdir().unwrap();
    let missing = tmp.path().join("missing.json");
    let out = fraccurv(tmp.path(), &["dim", path_str(&missing)]);
    assert_eq!(out.status.code(), Some(2));

    let bad = tmp.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("cantor"))
        .unwrap()
        .replacen("\"1/3\"", "1.2", 1);
    std::fs::write(&bad, text).unwrap();
    let out = fraccurv(tmp.path(), &["dim", path_str(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("maps[0].ratio"));

    let out = fraccurv(tmp.path(), &["fractal", path_str(&fixture("cantor")), "-k", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn runtime_failures_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = fixture("cantor");
    let out = fraccurv(
        tmp.path(),
        &["fractal", path_str(&cfg), "--method", "cesaro", "--delta", "2"],
    );
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("delta"));

    let unwritable = tmp.path().join("no-such-dir").join("out.csv");
    let out = fraccurv(tmp.path(), &["dim", path_str(&cfg), "--out", path_str(&unwritable)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn fixtures_round_trip_canonically() {
    for name in ["cantor", "gasket", "carpet", "nonlattice"] {
        let cfg = parse_config(&fixture(name)).unwrap();
        let canon = cfg.to_canonical();
        let again = fraccurv::config::parse_str(&canon).unwrap();
        assert_eq!(again, cfg, "{name}");
        assert_eq!(again.to_canonical(), canon, "{name}");
        cfg.build_ifs().unwrap();
    }
    let gasket = parse_config(&fixture("gasket")).unwrap();
    assert_eq!((gasket.maps.len(), gasket.ambient_dim), (3, 2));
}
