use std::process::{Command, Output};

use serde_json::Value;

fn dynline(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dynline"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn height_of_half_under_basilica() {
    let out = dynline(&[
        "height", "--map", "z^2-1", "--point", "1/2", "--tol", "1e-9",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 2f64.ln()).abs() <= 1e-9);
    assert!(v["error_radius"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn power_map_height_is_exact() {
    let out = dynline(&["height", "--map", "z^3", "--point", "-7/4"]);
    let v = json(&out);
    assert_eq!(v["exact"], "log(7)");
}

#[test]
fn line_decide_gaussian_rotation() {
    let out = dynline(&[
        "line-decide",
        "--maps",
        "z^3;z^3",
        "--conductor",
        "4",
        "--line",
        "(0,0)+t*(1,w)",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "Preperiodic");
    assert_eq!(v["preperiod"], 0);
    assert_eq!(v["period"], 2);
}

#[test]
fn symmetry_of_odd_cubic() {
    let out = dynline(&["symmetry", "--map", "z^3+2*z"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["center"], "0");
    assert_eq!(v["order"], 2);
}

#[test]
fn symmetry_of_monomial_is_infinite() {
    let v = json(&dynline(&["symmetry", "--map", "z^2+2*z"]));
    assert_eq!(v["center"], "-1");
    assert_eq!(v["order"], "infinite");
}

#[test]
fn same_julia_with_negated_map() {
    let v = json(&dynline(&["same-julia", "--map1", "z^2", "--map2", "-z^2"]));
    assert_eq!(v["same"], true);
    assert_eq!(v["tau"]["a"], "-1");
    let v = json(&dynline(&[
        "same-julia",
        "--map1",
        "z^2",
        "--map2",
        "z^2+1",
    ]));
    assert_eq!(v["same"], false);
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["point-orbit", "--map", "z^2-1", "--point", "0"], 0),
        (&["point-orbit", "--map", "z^2-1", "--point", "1/3"], 0),
        (
            &[
                "point-orbit",
                "--map",
                "z^2-1",
                "--point",
                "0",
                "--budget",
                "1",
            ],
            2,
        ),
        (
            &[
                "line-decide",
                "--maps",
                "z^2;z^2+1",
                "--line",
                "(0,0)+t*(1,1)",
            ],
            0,
        ),
        (&["height", "--map", "z^2+w", "--point", "1"], 1),
        (&["height", "--map", "z", "--point", "1"], 1),
        (
            &["height", "--map", "z^2", "--point", "1", "--tol", "-1"],
            1,
        ),
        (
            &[
                "line-decide",
                "--maps",
                "z^2;z^3",
                "--line",
                "(0,0)+t*(1,1)",
            ],
            1,
        ),
        (
            &[
                "line-decide",
                "--maps",
                "z^2;z^2",
                "--line",
                "(1,2)+t*(0,0)",
            ],
            1,
        ),
        (
            &[
                "line-decide",
                "--maps",
                "z^2;z^2",
                "--line",
                "(1,2,3)+t*(1,1,1)",
            ],
            1,
        ),
        (&["symmetry", "--map", "z^^2"], 1),
        (&["symmetry"], 1),
        (&["frobnicate"], 1),
        (&["symmetry", "--map", "z^2", "--bogus", "1"], 1),
        (
            &[
                "julia",
                "--map",
                "z^2",
                "--window",
                "1,0,0,1",
                "--out",
                "/dev/null",
            ],
            1,
        ),
    ];
    for (args, code) in cases {
        let out = dynline(args);
        assert_eq!(out.status.code(), Some(*code), "{args:?}");
        if *code == 1 {
            assert!(!out.stderr.is_empty(), "{args:?} should explain itself");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let csv = dir.path().join(name);
        let out = dynline(&[
            "scan",
            "--maps",
            "z^2;z^2+1",
            "--line",
            "(0,0)+t*(1,1)",
            "--height-bound",
            "1.0986122886681098",
            "--out",
            csv.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
        (out.stdout, std::fs::read(csv).unwrap())
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    let csv = String::from_utf8(a.1).unwrap();
    assert!(csv.starts_with("t,point,hhat,error,flag\n"));
    let summary: Value = serde_json::from_slice(&a.0).unwrap();
    assert_eq!(summary["zero_candidates"], Value::Array(vec![]));
    assert_eq!(summary["max_size"], 3);
}

#[test]
fn julia_writes_graymap_and_green_csv() {
    let dir = tempfile::tempdir().unwrap();
    let pgm = dir.path().join("j.pgm");
    let csv = dir.path().join("g.csv");
    let out = dynline(&[
        "julia",
        "--map",
        "z^2",
        "--res",
        "16",
        "--max-iter",
        "50",
        "--out",
        pgm.to_str().unwrap(),
        "--green-out",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let bytes = std::fs::read(&pgm).unwrap();
    let header = b"P5\n16 16\n50\n";
    assert_eq!(&bytes[..header.len()], header);
    assert_eq!(bytes.len(), header.len() + 256);
    let green = std::fs::read_to_string(&csv).unwrap();
    assert!(green.starts_with("re,im,green\n"));
    assert_eq!(green.lines().count(), 257);
}

#[test]
fn floats_have_at_most_fifteen_significant_digits() {
    let out = dynline(&["height", "--map", "z^2+1", "--point", "1/3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let shown = v["value"].to_string();
    let digits = shown
        .split(['e', 'E'])
        .next()
        .unwrap()
        .chars()
        .filter(char::is_ascii_digit)
        .collect::<String>();
    assert!(digits.trim_start_matches('0').len() <= 15, "{shown}");
}
