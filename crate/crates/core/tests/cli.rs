use std::process::{Command, Output};

use serde_json::Value;

fn ftc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ftc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = ftc(&all);
    let v = serde_json::from_str(&stdout(&out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(&out)));
    (code(&out), v)
}

fn value(v: &Value) -> f64 {
    v["result"]["value"].as_f64().unwrap()
}

#[test]
fn integrate_examples() {
    let (c, v) = json(&[
        "integrate",
        "--dim",
        "2",
        "--box",
        "0:1,0:1",
        "--F",
        "x1^2*x2^2/4",
    ]);
    assert_eq!(c, 0);
    assert_eq!(value(&v), 0.25);
    assert_eq!(v["status"], "ok");
    assert_eq!(
        v["diagnostics"]["contributions"].as_array().unwrap().len(),
        4
    );

    let (c, v) = json(&["integrate", "--dim", "2", "--box", "0:1,0:1", "--f", "1"]);
    assert_eq!(c, 0);
    assert!((value(&v) - 1.0).abs() < 1e-14);

    let (c, v) = json(&[
        "integrate",
        "--dim",
        "2",
        "--box",
        "0:1,0:1",
        "--f",
        "x1*x2",
        "--exact",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["value"], "1/4");

    let out = ftc(&[
        "integrate",
        "--dim",
        "2",
        "--box",
        "0:1,0:1",
        "--f",
        "x1*x2",
        "--exact",
    ]);
    assert_eq!(stdout(&out), "value: 1/4\n");
}

#[test]
fn integrate_exact_from_antiderivative_and_rational_box() {
    let (c, v) = json(&["integrate", "--box", "1/2:3/2", "--F", "x1^3", "--exact"]);
    assert_eq!(c, 0);
    // (3/2)³ − (1/2)³
    assert_eq!(v["result"]["value"], "13/4");
}

#[test]
fn integrate_verify_reports_the_oracle() {
    let (c, v) = json(&[
        "integrate",
        "--box",
        "0:pi/2,0:pi/2",
        "--f",
        "sin(x1)*cos(x2)",
        "--verify",
    ]);
    assert_eq!(c, 0);
    assert!((value(&v) - 1.0).abs() < 1e-8);
    let r = &v["result"];
    assert!((r["oracle"].as_f64().unwrap() - 1.0).abs() < 1e-8);
    assert!(r["rel_diff"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn exit_codes() {
    // usage
    assert_eq!(code(&ftc(&[])), 1);
    assert_eq!(code(&ftc(&["integrate", "--box", "0:1"])), 1);
    assert_eq!(code(&ftc(&["integrate", "--box", "0-1", "--f", "1"])), 1);
    assert_eq!(
        code(&ftc(&[
            "integrate",
            "--dim",
            "3",
            "--box",
            "0:1",
            "--f",
            "1"
        ])),
        1
    );
    assert_eq!(code(&ftc(&["integrate", "--box", "1:0", "--f", "1"])), 1);
    assert_eq!(
        code(&ftc(&[
            "integrate",
            "--box",
            "0:1",
            "--f",
            "1",
            "--F",
            "x1"
        ])),
        1
    );
    assert_eq!(
        code(&ftc(&[
            "subdivide-check",
            "--F",
            "x1",
            "--box",
            "0:1",
            "--grid",
            "2,2"
        ])),
        1
    );
    assert_eq!(code(&ftc(&["--help"])), 0);
    // parse
    assert_eq!(
        code(&ftc(&["integrate", "--box", "0:1", "--f", "x1 +* 2"])),
        2
    );
    assert_eq!(code(&ftc(&["integrate", "--box", "0:1", "--f", "x2"])), 2);
    assert_eq!(
        code(&ftc(&[
            "triangle", "--p", "0,0", "--q", "1,0", "--r", "0,1", "--f", "sin x1"
        ])),
        2
    );
    // numeric / domain
    assert_eq!(
        code(&ftc(&["integrate", "--box", "0:1", "--f", "log(x1 - 1)"])),
        3
    );
    assert_eq!(
        code(&ftc(&[
            "integrate",
            "--box",
            "0:pi",
            "--f",
            "x1",
            "--exact"
        ])),
        3
    );
    assert_eq!(
        code(&ftc(&[
            "integrate",
            "--box",
            "0:1",
            "--f",
            "sin(x1)",
            "--exact"
        ])),
        3
    );
    assert_eq!(
        code(&ftc(&[
            "parallelotope",
            "--origin",
            "0,0",
            "--edges",
            "1,0;2,0",
            "--f",
            "1"
        ])),
        3
    );
    assert_eq!(
        code(&ftc(&[
            "triangle", "--p", "0,0", "--q", "1,1", "--r", "2,2", "--f", "1"
        ])),
        3
    );
    // check failed
    assert_eq!(
        code(&ftc(&[
            "check-antiderivative",
            "--f",
            "x1*x2",
            "--F",
            "x1*x2",
            "--box",
            "0:1,0:1"
        ])),
        4
    );
    assert_eq!(
        code(&ftc(&[
            "triangle", "--p", "0,0", "--q", "1,0", "--r", "0,1", "--f", "x1"
        ])),
        4
    );
}

#[test]
fn parse_errors_point_at_the_offset() {
    let out = ftc(&["integrate", "--box", "0:1", "--f", "x1 +* 2"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("offset 4"), "{err}");
    assert!(err.contains("x1 +* 2\n    ^"), "{err}");

    let (c, v) = json(&["integrate", "--box", "0:1", "--f", "x1 +* 2"]);
    assert_eq!(c, 2);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["diagnostics"]["error"]["offset"], 4);
}

#[test]
fn check_antiderivative_examples() {
    let (c, v) = json(&[
        "check-antiderivative",
        "--f",
        "x1*x2",
        "--F",
        "x1^2*x2^2/4",
        "--box",
        "0:1,0:1",
    ]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "ok");
    assert_eq!(v["diagnostics"]["points_checked"], 25);

    let (c, _) = json(&[
        "check-antiderivative",
        "--f",
        "x1*x2",
        "--F",
        "x1^2*x2^2/4 + x1^3",
        "--box",
        "0:1,0:1",
    ]);
    assert_eq!(c, 0);

    let (c, v) = json(&[
        "check-antiderivative",
        "--f",
        "x1*x2",
        "--F",
        "x1*x2",
        "--box",
        "0:1,0:1",
    ]);
    assert_eq!(c, 4);
    assert_eq!(v["status"], "fail");
    // ∂₁∂₂(x1·x2) = 1, so the miss is largest where x1·x2 is smallest
    let worst: Vec<f64> = v["diagnostics"]["worst_point"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    assert!(worst.iter().all(|&x| x < 0.2), "{worst:?}");
}

#[test]
fn check_antiderivative_step_options() {
    let base = [
        "check-antiderivative",
        "--f",
        "x1*x2",
        "--F",
        "x1^2*x2^2/4",
        "--box",
        "0:1,0:1",
    ];
    let mut one = base.to_vec();
    one.extend(["--h", "0.01"]);
    assert_eq!(code(&ftc(&one)), 0);
    let mut two = base.to_vec();
    two.extend(["--h", "0.01,0.02"]);
    assert_eq!(code(&ftc(&two)), 0);
    let mut three = base.to_vec();
    three.extend(["--h", "0.01,0.02,0.03"]);
    assert_eq!(code(&ftc(&three)), 1);
    let mut big = base.to_vec();
    big.extend(["--h", "0.6"]);
    assert_eq!(code(&ftc(&big)), 1);
}

#[test]
fn parallelotope_examples() {
    let (c, v) = json(&[
        "parallelotope",
        "--origin",
        "0,0",
        "--edges",
        "2,0;1,1",
        "--f",
        "1",
    ]);
    assert_eq!(c, 0);
    assert!((value(&v) - 2.0).abs() < 1e-10);
    assert_eq!(v["diagnostics"]["det"], 2.0);
    assert_eq!(v["diagnostics"]["method"], "parallelotope");

    let (c, v) = json(&[
        "parallelotope",
        "--origin",
        "0,0",
        "--edges",
        "1,0;0,1",
        "--f",
        "x1",
        "--verify",
        "--samples",
        "20000",
    ]);
    assert_eq!(c, 0);
    assert!((value(&v) - 0.5).abs() < 1e-12);
    let mc = &v["diagnostics"]["monte_carlo"];
    assert_eq!(mc["seed"], 42);
    assert!(mc["sigmas"].as_f64().unwrap() <= 4.0);
}

#[test]
fn triangle_examples() {
    let tri = ["triangle", "--p", "0,0", "--q", "1,0", "--r", "0,1", "--f"];
    let mut a = tri.to_vec();
    a.push("1");
    let (c, v) = json(&a);
    assert_eq!(c, 0);
    assert!((value(&v) - 0.5).abs() < 1e-8);
    assert_eq!(
        v["diagnostics"]["mirror_vertex"],
        serde_json::json!([1.0, 1.0])
    );

    let mut b = tri.to_vec();
    b.push("x1+x2");
    let (c, v) = json(&b);
    assert_eq!(c, 0);
    assert!((value(&v) - 1.0 / 3.0).abs() < 1e-8);

    let mut d = tri.to_vec();
    d.push("x1");
    let (c, v) = json(&d);
    assert_eq!(c, 4);
    assert_eq!(v["status"], "fail");
    assert_eq!(v["result"]["value"], Value::Null);
    let s = &v["diagnostics"]["symmetry"];
    assert!(s["max_deviation"].as_f64().unwrap() > s["tolerance"].as_f64().unwrap());
    let human = stdout(&ftc(&d));
    assert!(
        human.starts_with("symmetry check failed at t = "),
        "{human}"
    );
}

#[test]
fn subdivide_examples() {
    for (big_f, grid) in [
        ("x1*x2", "2,2"),
        ("x1*x2", "1,1"),
        ("x1^2*x2^2/4+x1^3", "2,2"),
    ] {
        let (c, v) = json(&[
            "subdivide-check",
            "--F",
            big_f,
            "--box",
            "0:1,0:1",
            "--grid",
            grid,
        ]);
        assert_eq!(c, 0);
        assert!(v["result"]["abs_diff"].as_f64().unwrap() <= 1e-15);
        if grid == "1,1" {
            assert_eq!(v["result"]["abs_diff"], 0.0);
        }
    }
}

#[test]
fn impossibility_output() {
    let out = ftc(&["impossibility"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert_eq!(
        text.lines().last().unwrap(),
        "0 of 64 assignments match, per triangulation; claim verified"
    );
    assert_eq!(text, stdout(&ftc(&["impossibility"])));

    let (c, v) = json(&["impossibility"]);
    assert_eq!(c, 0);
    assert_eq!(v["result"]["value"], 0);
    assert_eq!(v["diagnostics"]["claim_holds"], true);
    for t in v["diagnostics"]["triangulations"].as_array().unwrap() {
        assert_eq!(t["assignments"], 64);
        assert_eq!(t["matches"], 0);
        assert_eq!(t["shared_coefficients"], serde_json::json!([-2, 0, 2]));
    }
}

#[test]
fn json_schema_is_uniform() {
    let runs: [&[&str]; 6] = [
        &["integrate", "--box", "0:1", "--f", "x1"],
        &[
            "check-antiderivative",
            "--f",
            "1",
            "--F",
            "x1",
            "--box",
            "0:1",
        ],
        &["parallelotope", "--origin", "0", "--edges", "2", "--f", "1"],
        &[
            "triangle", "--p", "0,0", "--q", "1,0", "--r", "0,1", "--f", "1",
        ],
        &[
            "subdivide-check",
            "--F",
            "x1",
            "--box",
            "0:1",
            "--grid",
            "3",
        ],
        &["impossibility"],
    ];
    for args in runs {
        let (c, v) = json(args);
        assert_eq!(c, 0, "{args:?}");
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(
            keys,
            ["command", "inputs", "result", "diagnostics", "status"]
        );
        assert_eq!(v["command"], args[0]);
        assert!(v["result"].get("value").is_some());
    }
}

#[test]
fn json_value_matches_human_value() {
    let args = [
        "triangle", "--p", "0,0", "--q", "1,0", "--r", "0,1", "--f", "x1+x2",
    ];
    let human = stdout(&ftc(&args));
    let shown = human
        .lines()
        .next()
        .unwrap()
        .strip_prefix("value: ")
        .unwrap();
    let (_, v) = json(&args);
    let full = value(&v);
    assert_eq!(
        format!("{:.9e}", full),
        format!("{:.9e}", shown.parse::<f64>().unwrap())
    );
}

#[test]
fn identical_invocations_are_byte_identical() {
    let runs: [&[&str]; 3] = [
        &[
            "parallelotope",
            "--origin",
            "0,0",
            "--edges",
            "2,0;1,1",
            "--f",
            "x1",
            "--verify",
            "--samples",
            "5000",
            "--json",
        ],
        &[
            "integrate",
            "--box",
            "0:1,0:2",
            "--f",
            "exp(x1*x2)",
            "--verify",
        ],
        &["impossibility", "--json"],
    ];
    for args in runs {
        assert_eq!(ftc(args).stdout, ftc(args).stdout, "{args:?}");
    }
}
