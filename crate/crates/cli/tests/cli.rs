use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const DOCKET: &str = "ACC. John Doe\n     NÉ LE 01/01/1979\n\
POURS. Directeur des poursuites criminelles et pénales\n\
CHEFS\nCH. 1  C.CR. 266\n     VOIES DE FAIT\n     PLAID. COUPABLE 15/12/2019\n";

fn plumitif() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_plumitif"));
    for k in ["PLUMITIF_CONFIG", "PLUMITIF_STORE", "PLUMITIF_MAX_INPUT_BYTES", "PLUMITIF_FILL_MASK_URL"] {
        c.env_remove(k);
    }
    c
}

fn run(c: &mut Command) -> Output {
    c.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn summarize_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.txt", DOCKET);
    let o = run(plumitif().args(["summarize", "--in", &f]));
    assert!(o.status.success(), "{o:?}");
    assert_eq!(
        stdout(&o),
        "John Doe, né le 1er janvier 1979.\n\n\
La poursuite est menée par Directeur des poursuites criminelles et pénales.\n\n\
John Doe est accusé de voies de fait. L'accusé a plaidé coupable.\n"
    );

    let mut child = plumitif().args(["summarize", "--json"]).stdin(Stdio::piped()).stdout(Stdio::piped()).spawn().unwrap();
    child.stdin.take().unwrap().write_all(DOCKET.as_bytes()).unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["provisions"][0], "266");
}

#[test]
fn summarize_failure_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.txt", "bonjour\n");
    let o = run(plumitif().args(["summarize", "--in", &f]));
    assert!(!o.status.success());
    let empty = write(dir.path(), "e.txt", "");
    assert!(!run(plumitif().args(["summarize", "--in", &empty])).status.success());
}

#[test]
fn size_cap_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.txt", DOCKET);
    let cfg = write(dir.path(), "c.toml", "max_input_bytes = 20\n");
    let o = run(plumitif().args(["--config", &cfg, "summarize", "--in", &f]));
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit is 20"));
    let o = run(plumitif().args(["--config", &cfg, "summarize", "--in", &f]).env("PLUMITIF_MAX_INPUT_BYTES", "30"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("limit is 30"));
    let o = run(plumitif()
        .args(["--config", &cfg, "--max-input-bytes", "100000", "summarize", "--in", &f])
        .env("PLUMITIF_MAX_INPUT_BYTES", "30"));
    assert!(o.status.success());
}

#[test]
fn parse_ccc_writes_store() {
    let dir = tempfile::tempdir().unwrap();
    let html = write(dir.path(), "ccc.html", plumitif_core::ccc::SAMPLE_HTML);
    let out = dir.path().join("ccc.json");
    let o = run(plumitif().args(["parse-ccc", "--in", &html, "--out", out.to_str().unwrap()]));
    assert!(o.status.success(), "{o:?}");
    let store = plumitif_core::ccc::ProvisionStore::import_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(store.len(), 47);
    let sha = plumitif_core::ccc::sha256_hex(plumitif_core::ccc::SAMPLE_HTML.as_bytes());
    assert_eq!(store.source.unwrap().sha256.unwrap(), sha);

    let f = write(dir.path(), "d.txt", DOCKET);
    let o = run(plumitif().args(["summarize", "--in", &f]).env("PLUMITIF_STORE", out.to_str().unwrap()));
    assert!(o.status.success());
    let bad = write(dir.path(), "bad.html", "<p>nothing</p>");
    assert!(!run(plumitif().args(["parse-ccc", "--in", &bad, "--out", out.to_str().unwrap()])).status.success());
}

#[test]
fn synthesize_then_evaluate() {
    let dir = tempfile::tempdir().unwrap();
    let profile = write(
        dir.path(),
        "p.toml",
        "name = \"Essai\"\norganisation_plaintiff_rate = 0.8\nmin_charges = 1\nmax_charges = 3\n",
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = run(plumitif().args(["synthesize", "--profile", &profile, "--seed", "5", "--n", "12", "--out", out.to_str().unwrap()]));
        assert!(o.status.success(), "{o:?}");
    }
    let names: Vec<_> = std::fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 12);
    for n in &names {
        assert_eq!(std::fs::read(a.join(n)).unwrap(), std::fs::read(b.join(n)).unwrap());
    }

    let report = dir.path().join("r.json");
    let o = run(plumitif().args(["evaluate", "--corpus", a.to_str().unwrap(), "--report", report.to_str().unwrap()]));
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("Essai"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["error_rates"]["total"]["documents"], 12);
    assert_eq!(v["error_rates"]["total"]["extraction_errors"], 0);
    assert!(v["extraction"]["scores"]["macro_f1"].as_f64().unwrap() > 0.9);

    let o = run(plumitif().args(["synthesize", "--profile", "Montréal", "--n", "2", "--out", b.to_str().unwrap()]));
    assert!(o.status.success());
    let bad = write(dir.path(), "bad.toml", "name = \"X\"\norganisation_plaintiff_rate = 2.0\nmin_charges = 1\nmax_charges = 1\n");
    assert!(!run(plumitif().args(["synthesize", "--profile", &bad, "--out", b.to_str().unwrap()])).status.success());
    let empty = dir.path().join("empty");
    std::fs::create_dir(&empty).unwrap();
    assert!(!run(plumitif().args(["evaluate", "--corpus", empty.to_str().unwrap()])).status.success());
}

#[test]
fn fill_mask_endpoint_picks_preposition() {
    use axum::routing::post;
    use axum::Json;

    let rt = tokio::runtime::Runtime::new().unwrap();
    let listener = rt.block_on(tokio::net::TcpListener::bind("127.0.0.1:0")).unwrap();
    let addr = listener.local_addr().unwrap();
    let app = axum::Router::new().route(
        "/fill",
        post(|Json(body): Json<Value>| async move {
            assert!(body["inputs"].as_str().unwrap().contains("<mask>"));
            Json(serde_json::json!([
                { "token_str": "xyz", "score": 0.9 },
                { "token_str": " pour", "score": 0.6 },
                { "token_str": "de", "score": 0.3 }
            ]))
        }),
    );
    rt.spawn(async move { axum::serve(listener, app).await.unwrap() });

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "d.txt", DOCKET);
    let url = format!("http://{addr}/fill");
    let o = run(plumitif().args(["--fill-mask-url", &url, "summarize", "--in", &f]));
    assert!(o.status.success(), "{o:?}");
    assert!(stdout(&o).contains("John Doe est accusé pour voies de fait."), "{}", stdout(&o));

    // Unreachable model: fallback preposition with a warning.
    let o = run(plumitif().args(["--fill-mask-url", "http://127.0.0.1:9/none", "summarize", "--in", &f]));
    assert!(o.status.success());
    assert!(stdout(&o).contains("John Doe est accusé pour voies de fait."));
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
}
