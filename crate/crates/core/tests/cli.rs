use hopforms::cli::run;
use serde_json::Value;

fn json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["hopforms"];
    full.extend_from_slice(args);
    let (code, out) = run(full);
    (code, serde_json::from_str(&out).unwrap_or(Value::Null))
}

#[test]
fn trivial_form_certificate() {
    let (code, v) = json(&["theta", "--L", "trivial:C2", "--N", "C3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["grouplike_count"], 3);
    assert!(v["flags"].as_object().unwrap().values().all(|f| f == true));
    let (code2, v2) = json(&["theta", "compute", "--L", "trivial:C2", "--N", "C3"]);
    assert_eq!(code2, 0);
    assert_eq!(v["result"], v2["result"]);
}

#[test]
fn quaternion_group_algebra_blocks() {
    let (code, v) = json(&["wedderburn", "decompose", "--algebra", "QQ8"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["summary"], serde_json::json!(["H", "Q", "Q", "Q", "Q"]));
    let (_, v) = json(&["wedderburn", "abss", "--group", "Q8", "--form", "QQ8"]);
    assert_eq!(v["result"]["verdict"], false);
    let (_, v) = json(&["wedderburn", "abss", "--group", "Q8", "--form", "greither"]);
    assert_eq!(v["result"]["verdict"], true);
}

#[test]
fn invalid_input_exits_2() {
    assert_eq!(run(["hopforms", "theta", "--L", "nonsense", "--N", "C3"]).0, 2);
    assert_eq!(run(["hopforms", "theta", "--L", "trivial:C2"]).0, 2);
    assert_eq!(run(["hopforms", "groups", "aut", "X9"]).0, 2);
    assert_eq!(run(["hopforms", "census", "--max-order", "9"]).0, 2);
    assert_eq!(run(["hopforms", "frobnicate"]).0, 2);
    // ⟨(1,2)⟩ is not regular on the four elements of Gal(Q(z5))
    assert_eq!(run(["hopforms", "descend", "--E", "cyclotomic:5", "--N", "cycles:(1,2)"]).0, 2);
}

#[test]
fn verification_failure_exits_1() {
    let (code, _) = json(&["theta", "--L", "cyclotomic:5", "--N", "C4", "--embed", "iso"]);
    assert_eq!(code, 2);
    // U = {0, 2} ≤ C4 acting trivially on Q(sqrt 2) is not U-Galois
    let (code, _) = json(&["etale", "build", "--group", "C4", "--subgroup", "0,2", "--field", "quadratic:2", "--map", "0,0"]);
    assert_eq!(code, 1);
}

#[test]
fn certificates_round_trip() {
    let dir = std::env::temp_dir().join(format!("hopforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (i, args) in [
        vec!["theta", "q8", "--t", "k", "--d", "2"],
        vec!["descend", "--E", "biquadratic:2,3", "--N", "cycles:(1,3,2,4)"],
        vec!["hopf", "dual", "6"],
        vec!["wedderburn", "greither"],
    ]
    .into_iter()
    .enumerate()
    {
        let path = dir.join(format!("cert{i}.json"));
        let mut full = vec!["hopforms".to_string()];
        full.extend(args.iter().map(|s| s.to_string()));
        full.push("--output".into());
        full.push(path.display().to_string());
        let (code, out) = run(full);
        assert_eq!(code, 0, "{args:?}");
        assert_eq!(std::fs::read_to_string(&path).unwrap(), out);
        let (code, v) = json(&["verify", path.to_str().unwrap()]);
        assert_eq!(code, 0, "{args:?}");
        assert!(v["result"]["presentations_checked"].as_u64().unwrap() >= 1);
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn preimage_certificates() {
    let (code, v) = json(&["preimage", "--E", "biquadratic:2,3", "--N", "cycles:(1,3,2,4)"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["W"], serde_json::json!(["(1)", "(1,2)(3,4)"]));
    assert_eq!(v["result"]["L"]["fields"], serde_json::json!(["Q(sqrt(2))"]));
    let (code, v) = json(&["groups", "w", "Q8", "--N", "type:C8:0"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["quotient_is_aut"], false);
    assert_eq!(v["result"]["image_order"], 2);
}

#[test]
fn census_rows() {
    let (code, v) = json(&["census", "--max-order", "6"]);
    assert_eq!(code, 0);
    let rows = v["result"].as_array().unwrap();
    let s3 = rows.iter().find(|r| r["group"] == "S3").unwrap();
    assert_eq!(s3["counts"]["C6"], 3);
    let v4 = rows.iter().find(|r| r["group"] == "C2xC2").unwrap();
    assert_eq!(v4["counts"]["C4"], 3);
}

#[test]
fn worker_count_does_not_change_output() {
    let a = run(["hopforms", "groups", "regular", "Q8", "--type", "C8", "--workers", "1"]);
    let b = run(["hopforms", "groups", "regular", "Q8", "--type", "C8", "--workers", "4"]);
    assert_eq!(a, b);
}
