use quasiid_cli::{AnalysisConfig, CliError};
use serde_json::{json, Value};

fn base() -> Value {
    json!({
        "version": 1,
        "distributions": [{ "name": "p", "law": { "kind": "poisson", "rate": 1.0 } }],
        "outputs": { "report": "report.json" }
    })
}

fn with(mut v: Value, pointer: &str, value: Value) -> Value {
    *v.pointer_mut(pointer).unwrap_or_else(|| panic!("{pointer}")) = value;
    v
}

fn field_of(v: &Value) -> String {
    match AnalysisConfig::from_json(&v.to_string()) {
        Err(CliError::ConfigInvalid { field, .. }) => field,
        other => panic!("expected ConfigInvalid, got {other:?}"),
    }
}

#[test]
fn defaults_fill_in() {
    let c = AnalysisConfig::from_json(&base().to_string()).unwrap();
    assert_eq!(c.grid.t_max, 4.0);
    assert_eq!(c.grid.step, 1.0 / 1600.0);
    assert_eq!(c.h_values().len(), 7);
    assert_eq!(c.t_probes, vec![0.5, 1.0, 2.0]);
    assert_eq!(c.outputs.traces, None);
}

#[test]
fn composite_laws_parse() {
    let v = with(
        base(),
        "/distributions/0/law",
        json!({
            "kind": "convolution",
            "factors": [
                { "kind": "gaussian", "mean": 0.0, "variance": 0.5 },
                { "kind": "scaled_shift", "base": { "kind": "bernoulli", "p": 0.2 }, "scale": 2.0, "shift": -1.0 },
                { "kind": "discrete", "atoms": [{ "x": 0.0, "p": 0.5 }, { "x": 1.0, "p": 0.5 }] },
                { "kind": "degenerate", "at": 3.0 }
            ]
        }),
    );
    AnalysisConfig::from_json(&v.to_string()).unwrap();
}

#[test]
fn errors_name_the_field() {
    let cases = [
        (with(base(), "/version", json!(2)), "version"),
        (with(base(), "/distributions", json!([])), "distributions"),
        (
            with(base(), "/distributions/0/name", json!("a/b")),
            "distributions[0].name",
        ),
        (
            with(base(), "/distributions/0/law/rate", json!(-1.0)),
            "distributions[0].law",
        ),
        (
            with(base(), "/distributions/0/law/rate", json!("one")),
            "distributions[0].law",
        ),
        (
            with(base(), "/distributions/0/law", json!({ "kind": "cauchy" })),
            "distributions[0].law.kind",
        ),
        (
            with(
                base(),
                "/distributions/0/law",
                json!({ "kind": "convolution", "factors": [] }),
            ),
            "distributions[0].law.factors",
        ),
        (
            with(
                base(),
                "/distributions/0/law",
                json!({ "kind": "scaled_shift", "base": { "kind": "bernoulli", "p": 1.5 }, "scale": 1.0, "shift": 0.0 }),
            ),
            "distributions[0].law.base",
        ),
        (with(base(), "/outputs", json!({})), "outputs"),
        (with(base(), "/version", json!(null)), "version"),
    ];
    for (v, field) in cases {
        assert_eq!(field_of(&v), field, "{v}");
    }
}

#[test]
fn grid_invariants() {
    let mut v = base();
    v["grid"] = json!({ "t_max": 4.0, "step": 0.3 });
    assert_eq!(field_of(&v), "grid.step");
    v["grid"] = json!({ "t_max": 4.0, "step": std::f64::consts::PI / 512.0 });
    assert_eq!(field_of(&v), "grid.step");
    v["grid"] = json!({ "t_max": -1.0, "step": 0.25 });
    assert_eq!(field_of(&v), "grid.t_max");

    let mut v = base();
    v["h_sequence"] = json!({ "h0": 0.2, "ratio": 0.5, "count": 12 });
    assert_eq!(field_of(&v), "h_sequence");
    v["h_sequence"] = json!({ "h0": 0.2, "ratio": 1.5, "count": 3 });
    assert_eq!(field_of(&v), "h_sequence.ratio");
    v["h_sequence"] = json!({ "h0": 0.2, "ratio": 0.5, "count": 0 });
    assert_eq!(field_of(&v), "h_sequence.count");

    let mut v = base();
    v["t_probes"] = json!([0.5, 0.1234567]);
    assert_eq!(field_of(&v), "t_probes[1]");
    v["t_probes"] = json!([4.0]);
    assert_eq!(field_of(&v), "t_probes[0]");
    v["t_probes"] = json!([]);
    assert_eq!(field_of(&v), "t_probes");

    let mut v = base();
    v["tolerances"] = json!({ "h_fd": 0.000625 });
    assert_eq!(field_of(&v), "tolerances.h_fd");
}

#[test]
fn unknown_keys_are_rejected() {
    let mut v = base();
    v["grid"] = json!({ "t_max": 4.0, "step": 0.25, "stride": 2 });
    assert_eq!(field_of(&v), "grid.stride");
}

#[test]
fn duplicate_names_are_rejected() {
    let mut v = base();
    let d = v["distributions"][0].clone();
    v["distributions"].as_array_mut().unwrap().push(d);
    assert_eq!(field_of(&v), "distributions[1].name");
}

#[test]
fn shipped_example_is_valid() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/example-config.json");
    let c = AnalysisConfig::load(&path).unwrap();
    assert_eq!(c.distributions.len(), 4);
}
