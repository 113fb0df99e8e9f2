use std::process::{Command, Output};

use serde_json::Value;

fn nrpolar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nrpolar"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn error_of(out: &Output) -> (i32, Value) {
    let err = serde_json::from_slice(&out.stderr).expect("JSON error on stderr");
    (out.status.code().unwrap(), err)
}

#[test]
fn info_pbch() {
    let json: Value = serde_json::from_str(&stdout(&nrpolar(&[
        "info",
        "--channel",
        "pbch",
        "--A",
        "32",
        "--G",
        "864",
    ])))
    .unwrap();
    assert_eq!(json["N"], 512);
    assert_eq!(json["rm_mode"], "repeat");
    assert_eq!(json["K"], 56);
}

#[test]
fn encode_length() {
    let msg = "10110011100011110000101011001010";
    let out = stdout(&nrpolar(&[
        "encode",
        "--channel",
        "pucch",
        "--A",
        "32",
        "--G",
        "100",
        "--msg",
        msg,
    ]));
    let g = out.trim();
    assert_eq!(g.len(), 100);
    assert!(g.bytes().all(|b| b == b'0' || b == b'1'));
    let hex = stdout(&nrpolar(&[
        "encode",
        "--channel",
        "pucch",
        "--A",
        "32",
        "--G",
        "100",
        "--msg",
        "0xb38f0aca",
    ]));
    assert_eq!(hex.trim(), g);
}

#[test]
fn encode_then_decode() {
    let args = [
        "--channel",
        "pdcch",
        "--A",
        "30",
        "--G",
        "108",
        "--rnti",
        "0x4a21",
    ];
    let msg = "0x2aaa5555";
    let g = stdout(&nrpolar(
        &[&["encode"][..], &args, &["--msg", msg]].concat(),
    ));
    let out = stdout(&nrpolar(
        &[&["decode"][..], &args, &["--bits", g.trim()]].concat(),
    ));
    let json: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["message"], "101010101010100101010101010101");
    assert_eq!(json["valid"], true);

    let llr: Vec<String> = g
        .trim()
        .chars()
        .map(|c| if c == '0' { "1.5" } else { "-1.5" }.to_owned())
        .collect();
    let out = stdout(&nrpolar(
        &[&["decode"][..], &args, &["--llr", &llr.join(",")]].concat(),
    ));
    let json: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["crc_ok"], true);
}

#[test]
fn simulate_one_row_per_point() {
    let out = stdout(&nrpolar(&[
        "simulate",
        "--channel",
        "pucch",
        "--A",
        "32",
        "--G",
        "108",
        "--snr",
        "0:0.5:5",
        "--frames",
        "200",
        "--list",
        "8",
    ]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(
        lines[0],
        "config,channel,A,G,E,N,snr_db,frames,block_errors,bit_errors,false_alarms,early_term_rate,seconds"
    );
    assert_eq!(lines.len(), 12);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 13));
    assert!(lines[11].contains(",5.0,200,"));
}

#[test]
fn simulate_to_file_with_timing() {
    let path = std::env::temp_dir().join(format!("nrpolar-sim-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    stdout(&nrpolar(&[
        "simulate",
        "--channel",
        "pdcch",
        "--A",
        "40",
        "--G",
        "108",
        "--snr",
        "-1,1",
        "--frames",
        "50",
        "--model",
        "qpsk",
        "--timing",
        "--output",
        p,
    ]));
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    for r in rows {
        let seconds: f64 = r.rsplit(',').next().unwrap().parse().unwrap();
        assert!(seconds >= 0.0);
    }
}

#[test]
fn vectors_golden_layout() {
    let out = stdout(&nrpolar(&[
        "vectors",
        "--channel",
        "pusch",
        "--A",
        "1100",
        "--G",
        "2000",
        "--msg",
        &"01".repeat(550),
        "--golden",
    ]));
    let json: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(json["A"], 1100);
    assert_eq!(json["g"].as_array().unwrap().len(), 2000);
    let segs = json["segments"].as_array().unwrap();
    assert_eq!(segs.len(), 2);
    for key in ["a'", "c", "c'", "u", "d", "y", "e", "f"] {
        assert!(segs[0][key].is_array(), "{key}");
    }
    let full: Value = serde_json::from_str(&stdout(&nrpolar(&[
        "vectors",
        "--channel",
        "pucch",
        "--A",
        "16",
        "--G",
        "64",
        "--msg",
        "0xbeef",
    ])))
    .unwrap();
    assert_eq!(full["config"]["n_pc"], 3);
    assert_eq!(full["allocation"]["pc"].as_array().unwrap().len(), 3);
}

#[test]
fn polarize_csv() {
    let out = stdout(&nrpolar(&["polarize", "--delta", "0.5", "--n", "3"]));
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "index,erasure,capacity,sorted_capacity");
    assert_eq!(lines.len(), 9);
    assert_eq!(lines[1], "0,0.99609375,0.00390625,0.99609375");
    assert_eq!(lines[8], "7,0.00390625,0.99609375,0.00390625");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["info", "--channel", "uci"][..],
        &["info", "--channel", "satellite", "--A", "32", "--G", "100"],
        &["frobnicate"],
        &[
            "simulate",
            "--channel",
            "pucch",
            "--A",
            "32",
            "--G",
            "108",
            "--snr",
            "5:1:0",
        ],
    ] {
        let (code, err) = error_of(&nrpolar(args));
        assert_eq!(code, 2, "{args:?}");
        assert_eq!(err["error"], "usage");
    }
}

#[test]
fn domain_errors_exit_one() {
    let cases: [(&[&str], &str); 5] = [
        (
            &["info", "--channel", "pbch", "--A", "31", "--G", "864"],
            "bounds_violation",
        ),
        (
            &[
                "info",
                "--channel",
                "pucch",
                "--A",
                "32",
                "--G",
                "100",
                "--rnti",
                "7",
            ],
            "invalid_input",
        ),
        (
            &[
                "encode",
                "--channel",
                "pucch",
                "--A",
                "32",
                "--G",
                "100",
                "--msg",
                "0101",
            ],
            "length_mismatch",
        ),
        (
            &[
                "encode",
                "--channel",
                "pucch",
                "--A",
                "12",
                "--G",
                "100",
                "--msg",
                "0x1fff",
            ],
            "invalid_input",
        ),
        (
            &[
                "decode",
                "--channel",
                "pucch",
                "--A",
                "32",
                "--G",
                "100",
                "--llr",
                "1,2,3",
            ],
            "length_mismatch",
        ),
    ];
    for (args, kind) in cases {
        let (code, err) = error_of(&nrpolar(args));
        assert_eq!(code, 1, "{args:?}");
        assert_eq!(err["error"], kind, "{args:?}");
        assert!(err["message"].is_string());
    }
}

#[test]
fn help_succeeds() {
    let out = nrpolar(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("simulate"));
}
