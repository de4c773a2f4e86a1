use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_loopalg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

const GOLDEN: &[&[&str]] = &[
    &[
        "dj", "--p", "3", "--r", "1", "--n", "2", "--j", "3", "--json",
    ],
    &[
        "bss",
        "--model",
        "tensor",
        "--p",
        "3",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "12",
        "--pages",
        "2",
    ],
    &[
        "bss",
        "--model",
        "tensor",
        "--p",
        "3",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "12",
        "--pages",
        "2",
        "--json",
    ],
    &[
        "bss",
        "--model",
        "fibre",
        "--p",
        "3",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "24",
        "--json",
    ],
    &[
        "survivor", "--p", "3", "--r", "2", "--n", "2", "--k", "1", "--json",
    ],
    &["d2", "--r", "2", "--n", "2", "--json"],
    &["chain", "--r", "2", "--json"],
    &[
        "families", "--p", "3", "--r", "1", "--n", "2", "--k", "1", "--t-max", "4", "--csv",
    ],
    &["families", "--p", "2", "--r", "2", "--t-max", "2", "--json"],
    &[
        "gens",
        "--p",
        "5",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "19",
    ],
    &[
        "poincare",
        "--p",
        "3",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "14",
        "--json",
    ],
    &["oracle", "--p", "3", "--n", "2", "--max-deg", "12"],
];

#[test]
fn summand_json() {
    let out = run(GOLDEN[0]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["j"], 3);
    let dims: Vec<(String, u64)> = v["dims"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(k, x)| (k.clone(), x.as_u64().unwrap()))
        .collect();
    let want = [("6", 1), ("7", 2), ("8", 2), ("9", 2), ("10", 2), ("11", 1)];
    for (d, n) in want {
        assert!(dims.contains(&(d.to_string(), n)), "{dims:?}");
    }
    assert_eq!(dims.len(), 6);
    assert_eq!(v["basis"]["6"][0], "u^3");
}

#[test]
fn tensor_collapse_report() {
    let out = run(GOLDEN[1]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stdout(&out).contains("page 2 reduced part vanishes in degrees 1..12"));
    let v: Value = serde_json::from_str(&stdout(&run(GOLDEN[2]))).unwrap();
    assert_eq!(v["acyclicity"]["acyclic"], true);
    assert_eq!(v["model"]["kind"], "associative");
    assert_eq!(v["pages"][1]["page"], 2);
}

#[test]
fn fibre_residual_is_the_bottom_line() {
    let v: Value = serde_json::from_str(&stdout(&run(GOLDEN[3]))).unwrap();
    assert_eq!(v["acyclicity"]["acyclic"], false);
    assert_eq!(v["acyclicity"]["residual"], serde_json::json!([[3, 1, 1]]));
}

#[test]
fn survivors() {
    let v: Value = serde_json::from_str(&stdout(&run(GOLDEN[4]))).unwrap();
    assert_eq!(v["tau"]["nonzero"], true);
    assert_eq!(v["sigma"]["nonzero"], true);
    assert_eq!(
        v["slice"]["classes"],
        serde_json::json!(["L[v,L[u,v]]", "bQ1^1[v]"])
    );
}

#[test]
fn small_k_is_rejected() {
    let out = run(&["families", "--p", "3", "--r", "1", "--n", "2", "--k", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("k too small"));
}

#[test]
fn family_csv() {
    let out = stdout(&run(GOLDEN[7]));
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("space,degree,order,k,t,provenance"));
    let degrees: Vec<&str> = out
        .lines()
        .filter(|l| l.contains("v1-family(a)"))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert_eq!(degrees, ["11", "23", "35", "47", "59"]);
}

#[test]
fn usage_errors_exit_with_two() {
    let unknown = run(&["dj", "--p", "3", "--n", "2", "--j", "1", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    let missing = run(&["dj", "--p", "3", "--n", "2"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(stderr(&missing).contains("--j"));
    assert!(stderr(&missing).contains("Usage"));
    assert_eq!(
        run(&["dj", "--p", "4", "--n", "2", "--j", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["dj", "--p", "3", "--n", "1", "--j", "1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "bss",
            "--model",
            "sphere",
            "--p",
            "3",
            "--r",
            "1",
            "--n",
            "2",
            "--max-deg",
            "4"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "gens",
            "--p",
            "3",
            "--n",
            "2",
            "--max-deg",
            "8",
            "--json",
            "--csv"
        ])
        .status
        .code(),
        Some(2)
    );
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn cutoffs_are_input_errors() {
    let out = run(&[
        "bss",
        "--model",
        "omega2",
        "--p",
        "3",
        "--r",
        "1",
        "--n",
        "2",
        "--max-deg",
        "12",
        "--max-weight",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("cutoff"));
}

#[test]
fn other_commands_succeed() {
    for args in &GOLDEN[5..] {
        let out = run(args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", stderr(&out));
        assert!(!out.stdout.is_empty());
    }
    let chain: Value = serde_json::from_str(&stdout(&run(GOLDEN[6]))).unwrap();
    assert_eq!(chain["coefficient"], -8);
}

#[test]
fn golden_outputs_are_byte_identical() {
    for args in GOLDEN {
        let a = run(args);
        let b = run(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn config_file_presets_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("loopalg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "# experiment\np = 3\nr = 1\nn = 2\nj = 2\njson = true\n",
    )
    .unwrap();
    let cfg = cfg.to_str().unwrap();
    let from_file: Value = serde_json::from_str(&stdout(&run(&["dj", "--config", cfg]))).unwrap();
    assert_eq!(from_file["j"], 2);
    let overridden: Value =
        serde_json::from_str(&stdout(&run(&["dj", "--config", cfg, "--j", "3"]))).unwrap();
    assert_eq!(overridden["j"], 3);

    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        run(&["dj", "--config", bad.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );

    let out_path = dir.join("dj.json");
    let out = run(&["dj", "--config", cfg, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&out_path).unwrap();
    assert_eq!(written, stdout(&run(&["dj", "--config", cfg])));
    std::fs::remove_dir_all(&dir).ok();
}
