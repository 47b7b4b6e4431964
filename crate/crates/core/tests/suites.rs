use omfq::verify::{run, Suite};

fn check(s: Suite) {
    let rep = run(s).unwrap();
    println!("{rep}");
    assert!(rep.is_ok());
}

#[test]
fn gegenbauer() { check(Suite::Gegenbauer) }
#[test]
fn weil() { check(Suite::Weil) }
#[test]
fn prop56() { check(Suite::Prop56) }
#[test]
fn prop57() { check(Suite::Prop57) }
#[test]
fn prop62() { check(Suite::Prop62) }
#[test]
fn lemma63() { check(Suite::Lemma63) }
#[test]
fn ex64() { check(Suite::Ex64) }
#[test]
fn ex65() { check(Suite::Ex65) }
