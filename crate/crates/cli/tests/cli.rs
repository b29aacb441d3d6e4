use std::process::Command;

use serde_json::{json, Value};

use subminimal::algebra::upset_algebra;
use subminimal::frames::json::{frame_to_json, model_from_json};
use subminimal::frames::{eval, NFrame, Poset};
use subminimal::modal::{fixtures, modal_nframe_to_json, ns4_frame_to_json, NS4Frame, ModalNFrame};
use subminimal::syntax::parse_prop;
use subminimal::Bits;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_subminimal"))
        .args(args)
        .output()
        .expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stdout = String::from_utf8(out.stdout).expect("utf-8");
    let v = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (code, v)
}

fn two_point() -> NFrame {
    let p = Poset::new(2, &[(0, 1)]).unwrap();
    NFrame::from_fn(p, |x| if x == Bits(0b10) { Bits(0b11) } else { Bits(0b10) }).unwrap()
}

#[test]
fn decide_verdicts() {
    let (code, v) = run(&["decide", "--logic", "copc", "(p->q)->(~q->~p)"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("theorem")));

    let f = "(p->q)->(~q->~p)";
    let (code, v) = run(&["decide", "--logic", "nef", f]);
    assert_eq!((code, v["status"].as_str()), (1, Some("refuted")));
    let w = &v["witness"];
    let m = model_from_json(w).unwrap();
    assert_eq!(m.frame.size(), 2);
    let world = w["world"].as_u64().unwrap() as usize;
    assert!(!eval(&m, &parse_prop(f).unwrap()).contains(world));

    let (code, v) = run(&["decide", "--logic", "n", "(p <-> q) -> (~p <-> ~q)"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("theorem")));
}

#[test]
fn countermodel_and_bounds() {
    let (code, v) = run(&["countermodel", "--logic", "copc", "(p -> ~p) -> ~p"]);
    assert_eq!((code, v["status"].as_str()), (1, Some("refuted")));
    let (code, v) = run(&["countermodel", "--logic", "n", "p -> p", "--max-worlds", "2"]);
    assert_eq!((code, v["status"].as_str()), (0, Some("no-countermodel-up-to-bound")));
    let (code, v) = run(&["countermodel", "--logic", "n", "p -> p", "--max-worlds", "9"]);
    assert_eq!((code, v["status"].as_str()), (2, Some("error")));
}

#[test]
fn translate_and_parse() {
    let (code, v) = run(&["translate", "~p"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["formula"], "[n][]p");
    let (code, v) = run(&["parse", "--modal", "[n]p -> [][n]p"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["vars"], json!(["p"]));
    let (code, _) = run(&["parse", "p &"]);
    assert_eq!(code, 2);
    let (code, _) = run(&["no-such-command"]);
    assert_eq!(code, 2);
}

#[test]
fn frames_and_filtration() {
    let fr = frame_to_json(&two_point()).to_string();
    let (code, v) = run(&["check-frame", "--frame", &fr]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["classes"]["NeF"], true);
    assert_eq!(v["witness"]["classes"]["CoPC"], false);
    let (code, _) = run(&["check-frame", "--frame", &fr, "--logic", "copc"]);
    assert_eq!(code, 1);
    let not_local = r#"{"worlds": 2, "leq": [[0, 1]], "N": {"0": 0, "2": 2, "3": 0}}"#;
    let (code, v) = run(&["check-frame", "--frame", not_local]);
    assert_eq!((code, v["status"].as_str()), (1, Some("violation")));

    let mut model = frame_to_json(&two_point());
    model["valuation"] = json!({ "p": 2 });
    let (code, v) = run(&["filtrate", "--model", &model.to_string(), "--sigma", "~p"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["pi"].as_array().unwrap().len(), 2);
}

#[test]
fn algebra_commands() {
    let a = serde_json::to_string(&upset_algebra(&two_point())).unwrap();
    let (code, v) = run(&["algebra", "check", "--algebra", &a]);
    assert_eq!((code, v["witness"]["size"].as_u64()), (0, Some(3)));
    let (code, v) = run(&["algebra", "dual", "--algebra", &a]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["worlds"], 3);
    let (code, v) = run(&["algebra", "filtrate", "--algebra", &a, "--valuation", r#"{"p": 1}"#, "--sigma", "~p"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["correspondence"], true);
    let mut broken: Value = serde_json::from_str(&a).unwrap();
    broken["one"] = json!(0);
    let (code, _) = run(&["algebra", "check", "--algebra", &broken.to_string()]);
    assert_eq!(code, 1);
}

#[test]
fn antichain_matrix() {
    let (code, v) = run(&["antichain", "--max-n", "1", "--max-n-positive", "1"]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["leq"], json!([[true, false], [false, true]]));
    assert_eq!(v["witness"]["sizes"], json!([7, 9]));
}

#[test]
fn ns4_commands() {
    for (_, p, target) in fixtures::all() {
        let s = serde_json::to_string(&p).unwrap();
        let (code, _) = run(&["ns4", "check-proof", "--proof", &s, "--target", &target.to_string()]);
        assert_eq!(code, 0);
    }
    let (p, _) = fixtures::copc_axiom();
    let bare = serde_json::to_string(&p.lines).unwrap();
    assert_eq!(run(&["ns4", "check-proof", "--proof", &bare, "--system", "cos4"]).0, 0);
    let (code, v) = run(&["ns4", "check-proof", "--proof", &bare]);
    assert_eq!((code, v["witness"]["line"].as_u64()), (1, Some(0)));

    let up = NS4Frame::preorder(2, &[(0, 1)]).unwrap();
    let fr = NS4Frame::from_fn(up, |x| if x.contains(1) { Bits(0) } else { Bits(0b10) }).unwrap();
    let fr = ns4_frame_to_json(&fr).to_string();
    assert_eq!(run(&["ns4", "valid", "--frame", &fr, "[n]p -> [][n]p"]).0, 0);
    let (code, v) = run(&["ns4", "valid", "--frame", &fr, "[n]p -> p"]);
    assert_eq!(code, 1);
    assert!(v["witness"]["world"].is_u64());

    let bad = ModalNFrame::from_fn(2, |x| if x == Bits(0) || x == Bits(0b11) { Bits(1) } else { Bits(0) }).unwrap();
    let bad = modal_nframe_to_json(&bad).to_string();
    assert_eq!(run(&["ns4", "en", "--frame", &bad, "--n", "1"]).0, 1);
    assert_eq!(run(&["ns4", "rn", "--frame", &bad, "--n", "1"]).0, 1);
    assert_eq!(run(&["ns4", "en", "--frame", &bad, "--n", "0"]).0, 0);
}

#[test]
fn output_is_deterministic() {
    let args = ["decide", "--logic", "n", "~(p & q) -> ~p"];
    assert_eq!(run(&args), run(&args));
}
