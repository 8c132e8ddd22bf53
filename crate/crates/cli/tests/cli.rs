use std::path::PathBuf;
use std::process::{Command, Output};

fn scenario(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn hfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfp"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn order_and_tower() {
    let o = hfp(&["order", &scenario("example_multiple_k.json")]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("#G = 3^∞·7^∞·13^∞"), "{}", stdout(&o));

    let o = hfp(&[
        "tower",
        &scenario("example_proper_sub.json"),
        "--depth",
        "2",
    ]);
    let text = stdout(&o);
    assert!(text.contains("level 0: Q = Z/3 (order 3)"), "{text}");
    assert!(
        text.contains("level 2: Q = Z/4×Z/3 (order 12), kernel 4Z_2 × {e}"),
        "{text}"
    );
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn cohom_and_ccohom() {
    let o = hfp(&["cohom", &scenario("z3_k13.json"), "--s", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("j=1 Q=Z/3: Z/3"));

    let o = hfp(&[
        "ccohom",
        &scenario("example_proper_sub.json"),
        "--s",
        "2",
        "--format",
        "json",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["degree"], 2);
    let values = v["values"].as_array().unwrap();
    let z3 = values.iter().find(|x| x["coefficients"] == "Z/3").unwrap();
    // H^2(Z_2 × Z/3; Z/3) = H^2(Z/3; Z/3) ⊕ H^1(Z_2; H^1(Z/3; Z/3)) = Z/3 ⊕ 0
    assert_eq!(z3["value"], "Z/3");
}

#[test]
fn e2_formats_agree() {
    let path = scenario("z3_k13.json");
    assert_eq!(stdout(&hfp(&["e2", &path])), golden("e2_z3_k13.txt"));
    assert_eq!(
        stdout(&hfp(&["e2", &path, "--format", "json"])),
        golden("e2_z3_k13.json")
    );
    assert_eq!(
        stdout(&hfp(&["e2", &path, "--format", "svg"])),
        golden("e2_z3_k13.svg")
    );

    let json: serde_json::Value = serde_json::from_str(&golden("e2_z3_k13.json")).unwrap();
    let text = golden("e2_z3_k13.txt");
    let rows: Vec<&str> = text
        .lines()
        .filter(|l| l.contains('|') && !l.starts_with("s\\t"))
        .collect();
    for cell in json["cells"].as_array().unwrap() {
        let (s, t) = (
            cell["s"].as_u64().unwrap() as usize,
            cell["t"].as_i64().unwrap(),
        );
        let row = rows[rows.len() - 1 - s];
        let col = row.split('|').nth((t + 8) as usize + 1).unwrap().trim();
        assert_eq!(col, cell["value"].as_str().unwrap(), "({s}, {t})");
    }
}

#[test]
fn e2_writes_to_a_file_and_selects_family_members() {
    let out = std::env::temp_dir().join(format!("hfp-e2-{}.svg", std::process::id()));
    let o = hfp(&[
        "e2",
        &scenario("example_hq.json"),
        "--format",
        "svg",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.contains("<!-- format_version 1 -->"));
    std::fs::remove_file(&out).unwrap();

    let o = hfp(&[
        "e2",
        &scenario("example_proper_sub.json"),
        "--member",
        "1",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["group"], "2Z_2 × {e} ≤ Z_2 × Z/3");
    assert_eq!(v["flags"]["collapsed_in_window"], true);
    let chain = std::env::temp_dir().join(format!("hfp-chain-{}.json", std::process::id()));
    let body =
        r#"{"group":{"finite":{"cyclic":6}},"spectrum":"hq","family":[{"finite":["identity"]}]}"#;
    std::fs::write(&chain, body).unwrap();
    assert!(hfp(&["e2", chain.to_str().unwrap(), "--member", "0"])
        .status
        .success());
    assert_eq!(
        hfp(&["e2", chain.to_str().unwrap(), "--member", "1"])
            .status
            .code(),
        Some(2)
    );
    std::fs::remove_file(&chain).unwrap();
}

#[test]
fn hq_page_is_concentrated_at_the_origin() {
    let o = hfp(&["e2", &scenario("example_hq.json"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let nonzero: Vec<_> = v["cells"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["value"] != "0")
        .map(|c| {
            (
                c["s"].as_u64().unwrap(),
                c["t"].as_i64().unwrap(),
                c["value"].as_str().unwrap().to_string(),
            )
        })
        .collect();
    assert_eq!(nonzero, vec![(0, 0, "Q".to_string())]);
}

#[test]
fn check_reports() {
    let o = hfp(&[
        "check",
        &scenario("example_no_rule.json"),
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), golden("check_example_no_rule.json"));

    let o = hfp(&["check", &scenario("example_proper_sub.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rule: Vanishing"));
    assert!(text.contains("rank 3 (p=3, n=1, r=1)"));
}

#[test]
fn malformed_scenarios_exit_2() {
    let dir = std::env::temp_dir().join(format!("hfp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bodies = [
        "{}",
        "[1, 2]",
        r#"{"group":{"procyclic":{"p":2}},"spectrum":"hq","extra":1}"#,
        r#"{"group":{"procyclic":{"p":2}},"spectrum":{"morava_k":{"n":0,"p":2}}}"#,
        r#"{"group":{"procyclic":{"p":2}},"spectrum":"hq","limits":{"s_max":0}}"#,
        r#"{"group":{"procyclic":{"p":2}},"spectrum":"hq","primes_J":[]}"#,
        r#"{"format_version":"9","group":{"procyclic":{"p":2}},"spectrum":"hq"}"#,
    ];
    for (i, body) in bodies.iter().enumerate() {
        let p = dir.join(format!("bad{i}.json"));
        std::fs::write(&p, body).unwrap();
        for cmd in ["check", "order", "e2"] {
            let o = hfp(&[cmd, p.to_str().unwrap()]);
            assert_eq!(o.status.code(), Some(2), "{cmd} {body}");
            assert!(!o.stderr.is_empty());
        }
    }
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(
        hfp(&["e2", &scenario("z3_k13.json"), "--format", "png"])
            .status
            .code(),
        Some(2)
    );
}
