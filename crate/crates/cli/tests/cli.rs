use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/demo")
}

fn seatcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seatcast")).args(args).output().expect("binary runs")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Relative path → contents for every file under `dir`, skipping `out/`.
fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    fn walk(root: &Path, dir: &Path, acc: &mut BTreeMap<String, Vec<u8>>) {
        for e in std::fs::read_dir(dir).unwrap() {
            let path = e.unwrap().path();
            let rel = path.strip_prefix(root).unwrap().to_string_lossy().replace('\\', "/");
            if rel == "out" {
                continue;
            }
            if path.is_dir() {
                walk(root, &path, acc);
            } else {
                acc.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    let mut acc = BTreeMap::new();
    walk(dir, dir, &mut acc);
    acc
}

fn run_all(out: &Path) -> Output {
    let config = fixture().join("seatcast.toml");
    let o = seatcast(&["all", "--config", s(&config), "--out", s(out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    o
}

#[test]
fn shipped_fixture_matches_generator() {
    let tmp = tempfile::tempdir().unwrap();
    seatcast::demo::write(tmp.path()).unwrap();
    let fresh = tree(tmp.path());
    let shipped = tree(&fixture());
    assert_eq!(fresh.keys().collect::<Vec<_>>(), shipped.keys().collect::<Vec<_>>());
    for (name, bytes) in &fresh {
        assert!(shipped[name] == *bytes, "{name} differs from the generator output");
    }
}

#[test]
fn demo_run_outputs() {
    let tmp = tempfile::tempdir().unwrap();
    run_all(tmp.path());
    let read = |f: &str| std::fs::read_to_string(tmp.path().join(f)).unwrap();

    let forecast = read("forecast.csv");
    let lines: Vec<&str> = forecast.lines().collect();
    assert_eq!(lines[0], "constituency,lepep_seats,adc_seats");
    assert_eq!(lines.len(), 22);
    assert_eq!(lines[21], "Total Seats,23,37");

    // Only Lepep in constituency 17 lacks local coverage.
    let detail = read("forecast_detail.csv");
    let header: Vec<&str> = detail.lines().next().unwrap().split(',').collect();
    let col = header.iter().position(|h| *h == "fallback").expect("fallback column");
    let fallback: Vec<String> = detail
        .lines()
        .skip(1)
        .filter(|l| l.split(',').nth(col) == Some("true"))
        .map(|l| l.split(',').take(2).collect::<Vec<_>>().join(","))
        .collect();
    assert_eq!(fallback, ["c17,lepep"]);

    let log = read("ingest_log.csv");
    for reason in ["DATE_UNPARSEABLE", "OUT_OF_RANGE", "NON_POLITICAL", "NO_ENTITY"] {
        assert_eq!(log.matches(reason).count(), 1, "{reason}");
    }
    assert_eq!(log.matches("DUPLICATE").count(), 2);

    // Each outlet leans ±0.4 on the two leaders; candidate cells lack support.
    let bias = read("bias.csv");
    let nonzero: Vec<&str> = bias.lines().skip(1).filter(|l| !l.contains(",0,")).collect();
    assert_eq!(
        nonzero,
        [
            "defimedia,adc-leader,-0.4,15",
            "defimedia,lepep-leader,0.4,15",
            "lexpress,adc-leader,0.4,15",
            "lexpress,lepep-leader,-0.4,15",
        ]
    );

    let svg = read("forecast.svg");
    assert!(svg.contains("data-total-seats=\"60\""));
    assert!(svg.contains("data-seats=\"23\"") && svg.contains("data-seats=\"37\""));

    let manifest: serde_json::Value = serde_json::from_str(&read("manifest.json")).unwrap();
    assert_eq!(manifest["command"], "all");
    assert!(manifest["inputs"]["roster.toml"].is_string());
    assert!(manifest["inputs"]["outlets/lexpress/a0001.html"].is_string());
    assert_eq!(manifest["outputs"].as_object().unwrap().len(), 10);

    let eval: serde_json::Value = serde_json::from_str(&read("evaluation.json")).unwrap();
    assert_eq!(eval["split"], "test");
    let acc = eval["accuracy"].as_f64().unwrap();
    assert!(acc > 0.8 && acc < 1.0, "accuracy {acc}");

    let trend = read("trend.csv");
    assert!(trend.lines().nth(1).unwrap().starts_with("party:lepep,NATIONAL,2024-W27,2024-W44,"));
}

#[test]
fn stages_chain_to_the_same_forecast() {
    let tmp = tempfile::tempdir().unwrap();
    let all_dir = tmp.path().join("all");
    run_all(&all_dir);
    let roster = fixture().join("roster.toml");
    let corpus = all_dir.join("corpus.jsonl");
    let p = |f: &str| tmp.path().join(f);

    let ok = |o: Output| assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    ok(seatcast(&["classify", "--corpus", s(&corpus), "--roster", s(&roster), "--out", s(&p("labels.csv"))]));
    assert_eq!(std::fs::read(p("labels.csv")).unwrap(), std::fs::read(all_dir.join("labels.csv")).unwrap());
    assert!(p("labels.csv.manifest.json").exists());

    let labels = p("labels.csv");
    ok(seatcast(&[
        "bias",
        "--labels",
        s(&labels),
        "--roster",
        s(&roster),
        "--out",
        s(&p("bias.csv")),
        "--from",
        "2024-01-01",
        "--to",
        "2024-11-09",
    ]));
    // The pipeline also lists configured outlets with no labels; here both have labels.
    assert_eq!(std::fs::read(p("bias.csv")).unwrap(), std::fs::read(all_dir.join("bias.csv")).unwrap());

    ok(seatcast(&[
        "forecast",
        "--labels",
        s(&labels),
        "--roster",
        s(&roster),
        "--bias",
        s(&p("bias.csv")),
        "--out",
        s(&p("forecast.csv")),
        "--chart",
        s(&p("chart.svg")),
        "--from",
        "2024-01-01",
        "--to",
        "2024-11-09",
    ]));
    assert_eq!(
        std::fs::read(p("forecast.csv")).unwrap(),
        std::fs::read(all_dir.join("forecast.csv")).unwrap()
    );
    assert!(p("chart.svg").exists());

    ok(seatcast(&[
        "score",
        "--labels",
        s(&labels),
        "--roster",
        s(&roster),
        "--out",
        s(&p("series.csv")),
        "--from",
        "2024-01-01",
        "--to",
        "2024-11-09",
        "--trend-from",
        "2024-W27",
        "--trend-to",
        "2024-W44",
    ]));
    assert_eq!(std::fs::read(p("series.csv")).unwrap(), std::fs::read(all_dir.join("series.csv")).unwrap());
    assert_eq!(
        std::fs::read(p("series.csv.trend.csv")).unwrap(),
        std::fs::read(all_dir.join("trend.csv")).unwrap()
    );

    let gold = fixture().join("gold_labels.csv");
    let o = seatcast(&[
        "evaluate",
        "--predicted",
        s(&labels),
        "--gold",
        s(&gold),
        "--roster",
        s(&roster),
        "--split",
        "test",
        "--out",
        s(&p("eval.json")),
    ]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("accuracy "));
    assert_eq!(
        std::fs::read(p("eval.json")).unwrap(),
        std::fs::read(all_dir.join("evaluation.json")).unwrap()
    );
}

#[test]
fn ingest_command_matches_pipeline_corpus() {
    let tmp = tempfile::tempdir().unwrap();
    run_all(&tmp.path().join("all"));
    let config = fixture().join("seatcast.toml");
    let out = tmp.path().join("corpus.jsonl");
    let o = seatcast(&["ingest", "--config", s(&config), "--out", s(&out)]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(tmp.path().join("all/corpus.jsonl")).unwrap());
}

#[test]
fn missing_roster_is_a_config_error_and_writes_nothing() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = std::fs::read_to_string(fixture().join("seatcast.toml"))
        .unwrap()
        .replace("roster = \"roster.toml\"", "roster = \"nowhere.toml\"");
    let cfg = cfg.replace("outlets/", &format!("{}/outlets/", fixture().display()));
    std::fs::write(tmp.path().join("seatcast.toml"), cfg).unwrap();
    let o = seatcast(&["all", "--config", s(&tmp.path().join("seatcast.toml"))]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let roster = fixture().join("roster.toml");
    // Missing input data.
    let o = seatcast(&[
        "score",
        "--labels",
        "/nonexistent/labels.csv",
        "--roster",
        s(&roster),
        "--out",
        s(&tmp.path().join("x.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!tmp.path().join("x.csv").exists());
    // Usage error.
    assert_eq!(seatcast(&["score"]).status.code(), Some(2));
    // Invalid parameter.
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, "roster = \"r.toml\"\n[params]\nsplit_ratio = 1.5\n[[outlet]]\nid = \"x\"\n")
        .unwrap();
    assert_eq!(seatcast(&["all", "--config", s(&bad)]).status.code(), Some(2));
    // Malformed labels.
    let labels = tmp.path().join("labels.csv");
    std::fs::write(&labels, "not,a,labels,file\n").unwrap();
    let o = seatcast(&[
        "bias",
        "--labels",
        s(&labels),
        "--roster",
        s(&roster),
        "--out",
        s(&tmp.path().join("b.csv")),
    ]);
    assert_eq!(o.status.code(), Some(3));
}
