use std::path::Path;
use std::process::Command;

use micromorph::cli::run;

fn manifest() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// Runs in-process from the manifest directory's point of view.
fn cli(args: &[&str]) -> (i32, String, String) {
    let mut full = vec!["micromorph".to_string()];
    for a in args {
        let p = manifest().join(a);
        full.push(if a.ends_with(".toml") { p.display().to_string() } else { a.to_string() });
    }
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn table(s: &str) -> toml::Table {
    toml::from_str(s).expect("report parses as TOML")
}

fn float(t: &toml::Table, sec: &str, key: &str) -> f64 {
    t[sec][key].as_float().unwrap()
}

#[test]
fn homogenize_then_invert_round_trip() {
    let (code, out, _) = cli(&["homogenize", "materials/iso_homogenize.toml"]);
    assert_eq!(code, 0);
    let t = table(&out);
    assert!((float(&t, "macro", "kappa") - 2.0).abs() < 1e-10);
    assert!((float(&t, "macro", "mu") - 0.5).abs() < 1e-10);
    assert_eq!(t["diagnostics"]["smaller_is_stiffer"].as_bool(), Some(true));

    let (code, out, _) = cli(&["invert", "materials/iso_invert.toml"]);
    assert_eq!(code, 0);
    let t = table(&out);
    assert!((float(&t, "e", "kappa") - 3.0).abs() < 1e-10);
    assert!((float(&t, "e", "mu") - 1.0).abs() < 1e-10);
}

#[test]
fn printed_matrix_round_trips() {
    let (_, out, _) = cli(&["homogenize", "materials/cubic_raw.toml"]);
    let t = table(&out);
    let rows = t["macro"]["matrix"].as_array().unwrap();
    let printed = nalgebra::Matrix6::from_fn(|i, j| rows[i].as_array().unwrap()[j].as_float().unwrap());

    let text = std::fs::read_to_string(manifest().join("materials/cubic_raw.toml")).unwrap();
    let f = micromorph::cli::file::MaterialFile::parse(&text, 1e-9).unwrap();
    let h = micromorph::homogenize::macro_from_micro_e(&f.micro.unwrap(), &f.e.unwrap()).unwrap();
    let rel = (printed - h.macro_.matrix()).norm() / h.macro_.matrix().norm();
    assert!(rel < 1e-10, "{rel}");
}

#[test]
fn convention_flag_changes_shear_block_only() {
    let (_, v, _) = cli(&["homogenize", "materials/iso_homogenize.toml"]);
    let (_, m, _) = cli(&["--convention", "mandel", "homogenize", "materials/iso_homogenize.toml"]);
    let (v, m) = (table(&v), table(&m));
    let get = |t: &toml::Table, i: usize, j: usize| t["macro"]["matrix"][i][j].as_float().unwrap();
    assert_eq!(get(&v, 0, 1), get(&m, 0, 1));
    assert!((get(&m, 3, 3) - 2.0 * get(&v, 3, 3)).abs() < 1e-10);
    assert_eq!(m["convention"].as_str(), Some("mandel"));
    assert_eq!(float(&v, "macro", "mu"), float(&m, "macro", "mu"));
}

#[test]
fn csv_output() {
    let (code, out, _) = cli(&["--output", "csv", "homogenize", "materials/iso_homogenize.toml"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("key,value\n"));
    assert!(out.contains("macro.kappa,2.00000000000e0"));
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["validate", "materials/iso_homogenize.toml"]).0, 0);
    assert_eq!(cli(&["homogenize", "tests/data/not_spd.toml"]).0, 1);
    assert_eq!(cli(&["invert", "tests/data/macro_too_stiff.toml"]).0, 1);
    assert_eq!(cli(&["validate", "tests/data/broken.toml"]).0, 2);
    assert_eq!(cli(&["validate", "tests/data/unknown_key.toml"]).0, 2);
    assert_eq!(cli(&["validate", "tests/data/does_not_exist.toml"]).0, 2);
    assert_eq!(cli(&["homogenize", "materials/iso_invert.toml"]).0, 2);
    assert_eq!(cli(&["no-such-command"]).0, 2);
    assert_eq!(cli(&["--help"]).0, 0);
}

#[test]
fn stiffer_macro_is_reported() {
    let (code, _, err) = cli(&["invert", "tests/data/macro_too_stiff.toml"]);
    assert_eq!(code, 1);
    assert!(err.contains("smaller is stiffer"), "{err}");
}

#[test]
fn asymmetric_matrix_names_the_entry() {
    let (code, _, err) = cli(&["validate", "tests/data/asymmetric.toml"]);
    assert_eq!(code, 1);
    assert!(err.contains("(6,3)") || err.contains("(3,6)"), "{err}");
}

#[test]
fn zero_coupling_is_flagged_non_redundant() {
    let (code, out, _) = cli(&["validate", "tests/data/zero_coupling.toml"]);
    assert_eq!(code, 0);
    assert_eq!(table(&out)["coupling"]["note"].as_str(), Some("non-redundant (Cc=0)"));
}

#[test]
fn log_projection_of_diag_124() {
    let (code, out, _) = cli(&["project-coupling", "--mean", "log", "materials/coupling_diag124.toml"]);
    assert_eq!(code, 0);
    assert!((float(&table(&out), "projection", "gamma") - 2.0).abs() < 1e-14);
}

#[test]
fn energy_report() {
    let (code, out, _) = cli(&["energy", "materials/cubic_raw.toml", "materials/state.toml"]);
    assert_eq!(code, 0);
    let t = table(&out);
    let parts: f64 = ["elastic", "micro_self", "rotational", "curvature"].iter().map(|k| float(&t, "energy", k)).sum();
    assert!((parts - float(&t, "energy", "total")).abs() < 1e-12);
    assert!(float(&t, "energy", "kinetic") > 0.0);
}

#[test]
fn dispersion_csv_slope() {
    let (code, out, _) =
        cli(&["dispersion", "materials/iso_dispersion.toml", "--kmax", "0.01", "--n", "11", "--direction", "0,0,1"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap().split(',').count(), 13);
    let last: Vec<f64> = lines.last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!(((last[1] / last[0]) - 0.5f64.sqrt()).abs() < 1e-3);
    assert!(((last[3] / last[0]) - 1.0).abs() < 1e-3);
}

#[test]
fn oned_demo_zero_length() {
    let (code, out, _) = cli(&["oned-demo", "--mu-e", "1", "--mu-micro", "1", "--lc-list", "0,0.05"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "Lc,mu_eff");
    let mu0: f64 = rows[1].split(',').nth(1).unwrap().parse().unwrap();
    let mu1: f64 = rows[2].split(',').nth(1).unwrap().parse().unwrap();
    assert!((mu0 - 0.5).abs() < 1e-10);
    assert!(mu1 > 0.5 && mu1 < 1.0);
}

#[test]
fn binary_is_deterministic() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_micromorph"))
            .current_dir(manifest())
            .args(["classify", "materials/cubic_raw.toml"])
            .output()
            .unwrap()
    };
    let (a, b) = (run(), run());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let t = table(&String::from_utf8(a.stdout).unwrap());
    assert_eq!(t["micro"]["class"].as_str(), Some("cubic"));
    assert_eq!(t["e"]["class"].as_str(), Some("orthotropic"));
    assert_eq!(t["coupling"]["class"].as_str(), Some("tetragonal"));
}

#[test]
fn binary_exit_code_for_domain_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_micromorph"))
        .current_dir(manifest())
        .args(["homogenize", "tests/data/not_spd.toml"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
