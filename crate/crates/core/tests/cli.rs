use ainf::cli::*;
use clap::Parser;
use std::path::{Path, PathBuf};
use std::process::Command as Proc;

fn doc(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("documents").join(format!("{name}.json")).display().to_string()
}

fn run_report(args: &[&str]) -> Report {
    let mut full = vec!["ainf"];
    full.extend_from_slice(args);
    let cli = Cli::try_parse_from(full).unwrap();
    run(&cli).unwrap().unwrap()
}

fn ranks(r: &Report) -> Vec<(i64, usize)> {
    match &r.result {
        Outcome::Pi(t) | Outcome::Barhom(t) | Outcome::Twist(t) => t.rows.clone(),
        o => panic!("unexpected {o:?}"),
    }
}

fn bin(args: &[&str]) -> (i32, String, String) {
    let out = Proc::new(env!("CARGO_BIN_EXE_ainf")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn tmp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ainf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn shipped_documents_match_the_builtin_examples() {
    for name in EXAMPLES {
        let shipped = std::fs::read_to_string(doc(name)).unwrap();
        assert_eq!(shipped, example(name).unwrap(), "{name}");
    }
}

#[test]
fn schema_lists_exactly_the_document_fields() {
    let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
    let mut props: Vec<String> = schema["properties"].as_object().unwrap().keys().cloned().collect();
    props.sort();
    let full = AlgebraDocument {
        field: "Q".into(),
        basis: vec![("a".into(), 0)],
        unit: Some("a".into()),
        differential: vec![("a".into(), "a".into(), "0".into())],
        products: vec![("a".into(), "a".into(), "a".into(), "1".into())],
        top: Some(0),
        simplicial: Some(SimplicialBlock { vertices: vec![], facets: vec![] }),
        ainfty: vec![AinftyEntry { arity: 3, inputs: vec![], output: "a".into(), coefficient: "1".into() }],
        twisting: Some(TwistingBlock { coalgebra: CoalgebraBlock { basis: vec![], differential: vec![], coproduct: vec![] }, map: vec![] }),
    };
    let v = serde_json::to_value(&full).unwrap();
    let mut keys: Vec<String> = v.as_object().unwrap().keys().cloned().collect();
    keys.sort();
    assert_eq!(props, keys);
    let entry = &schema["properties"]["ainfty"]["items"]["properties"];
    let mut ek: Vec<&String> = entry.as_object().unwrap().keys().collect();
    ek.sort();
    assert_eq!(ek, vec!["arity", "coefficient", "inputs", "output"]);
    assert_eq!(bin(&["schema"]).1, SCHEMA);
}

#[test]
fn homotopy_ranks_of_the_two_types() {
    let x = run_report(&["pi", &doc("x"), "--max-degree", "4"]);
    assert_eq!(ranks(&x), vec![(2, 2), (3, 3), (4, 2)]);
    for name in ["worked", "y"] {
        let y = run_report(&["pi", &doc(name), "--max-degree", "4"]);
        assert_eq!(ranks(&y), vec![(2, 2), (3, 3), (4, 1)], "{name}");
        assert!(y.checks.iter().all(|c| c.ok));
    }
}

#[test]
fn formality_verdicts() {
    let f = |name: &str| match run_report(&["formality", &doc(name)]).result {
        Outcome::Formality(f) => f,
        o => panic!("{o:?}"),
    };
    let x = f("x");
    assert_eq!(x.verdict, "formal");
    let y = f("y");
    assert_eq!(y.verdict, "nonformal");
    assert_eq!((y.arity, y.orbits), (Some(3), Some(2)));
    assert_eq!(f("s3").verdict, "formal");
}

#[test]
fn hopf_twisted_tensor_product() {
    let r = run_report(&["twist", &doc("hopf")]);
    assert_eq!(ranks(&r), vec![(-3, 1), (-2, 0), (-1, 0), (0, 1)]);
    let (code, _, err) = bin(&["twist", &doc("x")]);
    assert_eq!(code, 2, "{err}");
}

fn products(r: &Report) -> Vec<(String, String, String, String)> {
    match &r.result {
        Outcome::Minmodel(m) => {
            let u = m.structure.unit.clone();
            m.structure.products.iter().filter(|(a, b, _, _)| Some(a) != u.as_ref() && Some(b) != u.as_ref()).cloned().collect()
        }
        o => panic!("{o:?}"),
    }
}

#[test]
fn torus_and_wedge_cup_products() {
    let t = run_report(&["minmodel", &doc("torus"), "--arity", "2"]);
    let p = products(&t);
    assert_eq!(p.len(), 2);
    let (a, b, c, k) = &p[0];
    assert_eq!(p[1], (b.clone(), a.clone(), c.clone(), if k == "1" { "-1".into() } else { "1".into() }));
    assert!(k == "1" || k == "-1");
    let w = run_report(&["minmodel", &doc("wedge"), "--arity", "2"]);
    assert!(products(&w).is_empty());
    // the same cohomology groups
    let dims = |r: &Report| match &r.result {
        Outcome::Minmodel(m) => m.structure.basis.iter().map(|(_, d)| *d).collect::<Vec<_>>(),
        _ => unreachable!(),
    };
    assert_eq!(dims(&t), dims(&w));
}

#[test]
fn minimal_models_and_their_documents() {
    let x = run_report(&["minmodel", &doc("x")]);
    let Outcome::Minmodel(m) = &x.result else { panic!() };
    assert!(m.structure.ainfty.is_empty(), "zero differential gives m_≥3 = 0");
    let y = run_report(&["minmodel", &doc("y"), "--cinfty"]);
    let Outcome::Minmodel(m) = &y.result else { panic!() };
    assert!(!m.structure.ainfty.is_empty());
    assert!(m.structure.ainfty.iter().all(|e| e.arity == 3));
    // the emitted structure is itself a valid input
    let text = serde_json::to_string_pretty(&m.structure).unwrap();
    let p = tmp("ymin.json", &text);
    let again = run_report(&["pi", p.to_str().unwrap(), "--max-degree", "4"]);
    assert_eq!(ranks(&again), vec![(2, 2), (3, 3), (4, 1)]);
    let f = run_report(&["formality", p.to_str().unwrap()]);
    let Outcome::Formality(f) = f.result else { panic!() };
    assert_eq!(f.verdict, "nonformal");
}

#[test]
fn loop_space_of_the_three_sphere() {
    let r = run_report(&["barhom", &doc("s3"), "--max-degree", "10"]);
    let expect: Vec<(i64, usize)> = (0..10).map(|d| (d, (d % 2 == 0) as usize)).collect();
    assert_eq!(ranks(&r), expect);
}

#[test]
fn realizability_reports() {
    let r = run_report(&["realize", &doc("x"), &doc("s5"), &doc("map-x-s5")]);
    let Outcome::Realize(x) = r.result else { panic!() };
    assert!(x.realized);
    assert!(x.morphism.iter().all(|e| e.arity == 1));
    let r = run_report(&["realize", &doc("y"), &doc("s5"), &doc("map-y-s5")]);
    let Outcome::Realize(y) = r.result else { panic!() };
    assert!(!y.realized);
    assert_eq!((y.arity, y.forced), (Some(3), Some(true)));
    let res: Vec<(Vec<String>, Vec<(String, String)>)> = y.residual.iter().map(|e| (e.inputs.clone(), e.value.clone())).collect();
    let s = |c: &str| vec![("s".to_string(), c.to_string())];
    let w = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    assert_eq!(res, vec![(w(&["x", "x", "y"]), s("1")), (w(&["y", "x", "x"]), s("-1"))]);
}

#[test]
fn hochschild_table() {
    let r = run_report(&["hoch", &doc("worked"), "--cinfty", "--internal-degree", "-1"]);
    let Outcome::Hoch(h) = r.result else { panic!() };
    let row = h.rows.iter().find(|r| r.arity == 3).unwrap();
    assert_eq!((row.dim, row.harrison), (8, Some(2)));
    assert!(h.rows.iter().all(|r| r.degree == -1));
}

#[test]
fn field_override() {
    let r = run_report(&["minmodel", &doc("torus"), "--arity", "2", "--field", "F3"]);
    assert_eq!(r.field, "F3");
    for (_, _, _, k) in products(&r) {
        assert!(k == "1" || k == "2", "{k}");
    }
    let (code, _, _) = bin(&["minmodel", &doc("x"), "--field", "F9"]);
    assert_eq!(code, 2);
}

fn all_reports() -> Vec<Vec<String>> {
    let cmds: Vec<Vec<String>> = vec![
        vec!["minmodel".into(), doc("y"), "--cinfty".into()],
        vec!["minmodel".into(), doc("torus"), "--arity".into(), "3".into()],
        vec!["barhom".into(), doc("s3")],
        vec!["pi".into(), doc("worked")],
        vec!["formality".into(), doc("y")],
        vec!["hoch".into(), doc("x"), "--cinfty".into()],
        vec!["realize".into(), doc("y"), doc("s5"), doc("map-y-s5")],
        vec!["twist".into(), doc("hopf")],
    ];
    cmds
}

#[test]
fn reports_round_trip_byte_for_byte() {
    for args in all_reports() {
        let refs: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let r = run_report(&refs);
        let json = r.to_json();
        let back: Report = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.to_json(), json, "{args:?}");
        if let Outcome::Minmodel(m) = &r.result {
            let text = serde_json::to_string(&m.structure).unwrap();
            let d: AlgebraDocument = serde_json::from_str(&text).unwrap();
            assert_eq!(serde_json::to_string(&d).unwrap(), text);
        }
    }
}

#[test]
fn reports_are_deterministic_across_processes() {
    for args in all_reports().into_iter().take(5) {
        let mut full: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        full.push("--json");
        let (c1, a, _) = bin(&full);
        let (c2, b, _) = bin(&full);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b, "{args:?}");
        let r: Report = serde_json::from_str(&a).unwrap();
        assert_eq!(r.to_json(), a);
    }
}

#[test]
fn exit_codes() {
    let bad = tmp("bad.json", r#"{"field": "Q", "basis": [["a", 1]], "extra": 1}"#);
    assert_eq!(bin(&["pi", bad.to_str().unwrap()]).0, 2);
    let unknown = tmp("unknown.json", r#"{"field": "Q", "basis": [["a", 1]], "differential": [["a", "b", "1"]]}"#);
    assert_eq!(bin(&["minmodel", unknown.to_str().unwrap()]).0, 2);
    let coeff = tmp("coeff.json", r#"{"field": "F2", "basis": [["e", 0], ["a", 2]], "products": [["e", "a", "a", "1/2"]]}"#);
    assert_eq!(bin(&["minmodel", coeff.to_str().unwrap()]).0, 2);
    assert_eq!(bin(&["minmodel", "/nonexistent/doc.json"]).0, 2);
    let d2 = tmp("d2.json", r#"{"field": "Q", "basis": [["e", 0], ["a", 1], ["b", 2]], "differential": [["e", "a", "1"], ["a", "b", "1"]]}"#);
    assert_eq!(bin(&["minmodel", d2.to_str().unwrap()]).0, 3);
    assert_eq!(bin(&["minmodel", &doc("torus"), "--cinfty", "--arity", "2"]).0, 3);
    assert_eq!(bin(&["minmodel", &doc("torus")]).0, 3, "degree-1 classes need an explicit arity");
    assert_eq!(bin(&["pi", &doc("torus"), "--arity", "2"]).0, 3);
    let (code, out, _) = bin(&["pi", &doc("x"), "--max-degree", "4"]);
    assert_eq!(code, 0);
    assert!(out.contains("truncation:"));
    assert_eq!(CliError::Certification("d² ≠ 0".into()).exit_code(), 4);
}
