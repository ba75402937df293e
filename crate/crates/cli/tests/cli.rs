use std::fs;
use std::path::PathBuf;
use std::process::Command;

use pfdual::dualize::pf_object;
use pfdual::samples;
use pfdual_cli::formats::{to_json, AlgebraFile, CategoryFile, TransducerFile, Workspace};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pfdual(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_pfdual"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().expect("exited normally"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn check_axioms_exit_codes() {
    let ok = pfdual(&["check-axioms", &path("ex1.json")]);
    assert_eq!(ok.code, 0, "{}", ok.stderr);
    assert!(ok.stdout.contains("10 of 10 hold over 8 elements"));
    let bad = pfdual(&["check-axioms", &path("ex1_mutated.alg.json")]);
    assert_eq!(bad.code, 1);
    assert!(bad.stdout.contains("(7) a∘R(a) = a: FAIL at a=s"), "{}", bad.stdout);
    let json: Value =
        serde_json::from_str(&pfdual(&["check-axioms", "--format", "json", &path("ex1_mutated.alg.json")]).stdout)
            .unwrap();
    assert_eq!(json["axioms"][6]["witness"]["a"], "s");
    assert_eq!(json["all_pass"], false);
}

#[test]
fn dualize_running_example() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("ex1.dot");
    let run = pfdual(&[
        "dualize",
        "--format",
        "json",
        "--dot",
        dot.to_str().unwrap(),
        &path("ex1.json"),
    ]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let cat: CategoryFile = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(cat.objects.len(), 2);
    assert_eq!(cat.arrows.len(), 4);
    assert_eq!(cat.comp["up(s),up(s)"], "up(e12)");
    let dot = fs::read_to_string(dot).unwrap();
    assert_eq!(dot.matches("black:invis:black").count(), 2);
    assert_eq!(dot.matches(" -> ").count(), 4);
    assert_eq!(run.stdout, fs::read_to_string(data("pf_ex1.cat.json")).unwrap());
}

#[test]
fn bidual_reports() {
    let run = pfdual(&["bidual", &path("ex1.json")]);
    assert_eq!((run.code, run.stdout.as_str()), (0, "theta: isomorphism (8 ↔ 8)\n"));
    let run = pfdual(&["bidual", &path("pf_ex1.cat.json")]);
    assert_eq!(
        (run.code, run.stdout.as_str()),
        (0, "phi: isomorphism (2 objects, 4 arrows)\n")
    );
}

#[test]
fn sections_of_the_dual_and_a_rejected_category() {
    let run = pfdual(&["sections", &path("pf_ex1.cat.json")]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.ends_with("8 sections\n"));
    assert!(run.stdout.contains("{up(e3), up(s)}: e12 ↦ up(s), e3 ↦ up(e3)"));
    let json = pfdual(&["sections", "--format", "json", &path("pf_ex1.cat.json")]);
    let alg: AlgebraFile = serde_json::from_str(&json.stdout).unwrap();
    assert!(alg.to_algebra().unwrap().check_axioms().all_pass());
    let bad = pfdual(&["sections", &path("non_epi.cat.json")]);
    assert_eq!(bad.code, 2);
    assert!(bad.stderr.contains("a·b = a·c"), "{}", bad.stderr);
}

#[test]
fn hom_and_functor_checks() {
    let run = pfdual(&["hom-check", "--format", "json", &path("ex1b_into_ex1.hom.json")]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let json: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(json["homomorphism"]["holds"], true);
    assert_eq!(json["locally_proper"]["holds"], false);
    assert_eq!(json["locally_proper"]["witness"], "{c, c3}");
    assert_eq!(json["dual"]["plain_functor"], false);
    let f = pfdual(&["functor-check", &path("pf_ex1_id.functor.json")]);
    assert_eq!(f.code, 0, "{}", f.stderr);
    assert!(f.stdout.contains("plain functor: yes"));
    assert_eq!(
        pfdual(&["naturality", &path("ex1b_into_ex1.hom.json")]).stdout,
        "theta naturality: pass\n"
    );
    assert_eq!(
        pfdual(&["naturality", &path("pf_ex1_id.functor.json")]).stdout,
        "phi naturality: pass\n"
    );
}

#[test]
fn broken_hom_map_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    for f in ["ex1.json", "ex1b.json"] {
        fs::copy(data(f), dir.path().join(f)).unwrap();
    }
    let hom = dir.path().join("bad.hom.json");
    fs::write(
        &hom,
        r#"{"source": "ex1b.json", "target": "ex1.json",
            "map": {"0": "0", "e12": "e12", "e3": "e3", "1": "1", "s": "e12", "s3": "s3"}}"#,
    )
    .unwrap();
    let run = pfdual(&["hom-check", hom.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    assert!(run.stdout.starts_with("homomorphism: FAIL"), "{}", run.stdout);
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"elements\": [\"0\"],\n  \"compose\": [[0]]\n}\n").unwrap();
    let run = pfdual(&["check-axioms", bad.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("bad.json:3:"), "{}", run.stderr);
    fs::write(&bad, "{\"base\": [\"1\"], \"functions\": {\"f\": {\"1\": \"2\"}}}").unwrap();
    let run = pfdual(&["check-axioms", bad.to_str().unwrap()]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("unknown point"), "{}", run.stderr);
    let run = pfdual(&["check-axioms", "--max-base", "2", &path("ex1.json")]);
    assert_eq!(run.code, 2);
    assert!(run.stderr.contains("--max-base"));
}

#[test]
fn transducer_verbs() {
    assert_eq!(pfdual(&["transducer", "eval", &path("t2.json"), "aab"]).stdout, "bb\n");
    assert_eq!(
        pfdual(&["transducer", "eval", &path("t2.json"), "ba"]).stdout,
        "undefined\n"
    );
    let c = pfdual(&[
        "transducer",
        "compose",
        "--format",
        "json",
        &path("t2.json"),
        &path("t1.json"),
    ]);
    let t = serde_json::from_str::<TransducerFile>(&c.stdout)
        .unwrap()
        .to_transducer()
        .unwrap();
    assert_eq!(t.eval("b").unwrap().as_deref(), Some(""));
    assert_eq!(t.eval("ab").unwrap(), None);
    let p = pfdual(&[
        "transducer",
        "pref",
        "--format",
        "json",
        &path("t1.json"),
        &path("t2.json"),
    ]);
    let u = serde_json::from_str::<TransducerFile>(&p.stdout)
        .unwrap()
        .to_transducer()
        .unwrap();
    assert_eq!(u.eval("aa").unwrap().as_deref(), Some("aa"));
    assert_eq!(u.eval("aab").unwrap().as_deref(), Some("bb"));
    let d = pfdual(&["transducer", "dom", "--format", "json", &path("t2.json")]);
    assert_eq!(d.code, 0);
    assert!(serde_json::from_str::<Value>(&d.stdout).unwrap()["delta"].is_array());
    let ax = pfdual(&[
        "transducer",
        "axioms",
        "--max-len",
        "5",
        &path("t1.json"),
        &path("t2.json"),
    ]);
    assert_eq!(ax.code, 0, "{}", ax.stdout);
    let capped = pfdual(&["transducer", "axioms", "--max-len", "40", &path("t1.json")]);
    assert_eq!(capped.code, 2);
}

#[test]
fn round_trips() {
    let alg = samples::ex1();
    let file = AlgebraFile::from_algebra(&alg);
    assert_eq!(file.to_algebra().unwrap(), alg);
    let text = fs::read_to_string(data("ex1.alg.json")).unwrap();
    let parsed: AlgebraFile = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed, file, "table file disagrees with the library's tables");
    assert_eq!(to_json(&parsed), text);

    let cat = pf_object(&alg).unwrap().category;
    let cfile = CategoryFile::from_category(&cat);
    assert_eq!(cfile.to_category().unwrap(), cat);
    let text = fs::read_to_string(data("pf_ex1.cat.json")).unwrap();
    assert_eq!(to_json(&serde_json::from_str::<CategoryFile>(&text).unwrap()), text);
    let non_epi = serde_json::from_str::<CategoryFile>(&fs::read_to_string(data("non_epi.cat.json")).unwrap())
        .unwrap()
        .to_category()
        .unwrap();
    assert_eq!(non_epi, samples::non_epi_category());

    for t in [samples::t1(), samples::t2()] {
        assert_eq!(TransducerFile::from_transducer(&t).to_transducer().unwrap(), t);
    }
    let mut ws = Workspace::new(4);
    assert_eq!(ws.transducer(&data("t2.json")).unwrap(), samples::t2());
    assert_eq!(ws.algebra(&data("ex1.json")).unwrap(), alg);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["dualize", "--format", "json"],
        vec!["bidual", "--format", "json"],
        vec!["check-axioms"],
    ] {
        let mut full = args.clone();
        let p = path("ex1.json");
        full.push(&p);
        assert_eq!(pfdual(&full).stdout, pfdual(&full).stdout);
    }
}
