use framestarter_web::{classify, hill_climb, verify};
use serde_json::Value;

fn parse(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn verify_example() {
    let v = parse(&verify("group Z(10)\nsubgroup (5)\n3 , 4\n7 , 9\n8 , 1\n2 , 6\n"));
    assert_eq!(v["strong"], true);
    assert_eq!(v["drawing"]["pairs"].as_array().unwrap().len(), 4);
    assert_eq!(v["drawing"]["in_h"][5], true);

    let v = parse(&verify("group Z(10)\nsubgroup (5)\n3 , 4\n7 , 9\n8 , 1\n2 , 5\n"));
    assert_eq!(v["frame"], false);
    assert!(v["report"].as_str().unwrap().contains("missing element 6"));

    assert!(parse(&verify("group Z(10\n"))["error"].is_string());
}

#[test]
fn climb_is_seeded() {
    let a = hill_climb("Z(40)", "(5)", "strong", 3, 1000);
    assert_eq!(a, hill_climb("Z(40)", "(5)", "strong", 3, 1000));
    let v = parse(&a);
    assert_eq!(v["found"], true);
    assert!(v["starter"].as_str().unwrap().starts_with("group Z(40)\n"));
    assert!(parse(&hill_climb("Z(15)", "(5)", "strong", 0, 10))["error"].is_string());
}

#[test]
fn classify_rules() {
    let v = parse(&classify("Z(15)", "(5)", false));
    assert_eq!(v["kind"], "strong-impossible");
    assert_eq!(v["reasons"][0][0], "strong-5h");
    let v = parse(&classify("Z(14)", "(7)", false));
    assert_eq!(v["kind"], "frame-impossible");
}
