use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use serde_json::Value;

use lvh_core::block::Block;
use lvh_core::poly::{QuarterLaurent, SignedULaurent};
use lvh_core::{builders, duality, hecke, hodgepoly, kl, oracle, verify};

fn quarter() -> impl Strategy<Value = QuarterLaurent> {
    prop::collection::vec(((-8i64..8, -8i64..8), -5i64..6), 0..5)
        .prop_map(|v| QuarterLaurent::from_terms(v.into_iter().map(|(k, c)| (k, BigInt::from(c)))))
}

fn positive_quarter() -> impl Strategy<Value = QuarterLaurent> {
    prop::collection::vec(((-8i64..8, -8i64..8), 1i64..6), 1..5)
        .prop_map(|v| QuarterLaurent::from_terms(v.into_iter().map(|(k, c)| (k, BigInt::from(c)))))
}

fn signed() -> impl Strategy<Value = SignedULaurent> {
    prop::collection::vec(((-6i64..6, any::<bool>()), -5i64..6), 0..5)
        .prop_map(|v| SignedULaurent::from_terms(v.into_iter().map(|(k, c)| (k, BigInt::from(c)))))
}

proptest! {
    #[test]
    fn quarter_ring_axioms(a in quarter(), b in quarter(), c in quarter()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &QuarterLaurent::one(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn quarter_dual_is_involutive_automorphism(a in quarter(), b in quarter()) {
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!((&a * &b).dual(), &a.dual() * &b.dual());
        prop_assert_eq!((&a + &b).dual(), &a.dual() + &b.dual());
    }

    #[test]
    fn dual_commutes_with_to_mixed(a in quarter()) {
        // keep only terms that land in Z[u^{±1/2}]
        let a = QuarterLaurent::from_terms(a.terms().filter(|(k, _)| (k.0 + k.1) % 4 == 0).map(|(&k, c)| (k, c.clone())));
        prop_assert_eq!(a.dual().to_mixed(), a.to_mixed().dual());
    }

    #[test]
    fn norm_degree_is_additive(a in positive_quarter(), b in positive_quarter()) {
        let s = a.norm_degree().unwrap() + b.norm_degree().unwrap();
        prop_assert_eq!((&a * &b).norm_degree().unwrap(), s);
    }

    #[test]
    fn signed_ring_axioms(a in signed(), b in signed(), c in signed()) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &SignedULaurent::zeta()) * &SignedULaurent::zeta(), a.clone());
        prop_assert_eq!(a.dual().dual(), a.clone());
        prop_assert_eq!((&a * &b).dual(), &a.dual() * &b.dual());
    }

    #[test]
    fn twist_by_zeta_is_a_ring_map(a in signed(), b in signed()) {
        let even = |p: &SignedULaurent| SignedULaurent::from_terms(
            p.terms().filter(|(k, _)| k.0 % 2 == 0).map(|(&k, c)| (k, c.clone())));
        let (a, b) = (even(&a), even(&b));
        let lhs = (&a * &b).twist_by_zeta().unwrap();
        prop_assert_eq!(lhs, &a.twist_by_zeta().unwrap() * &b.twist_by_zeta().unwrap());
        prop_assert_eq!(a.twist_by_zeta().unwrap().twist_by_zeta().unwrap(), a.clone());
    }
}

fn block_json(g: &str, l: &str) -> Value {
    let b = builders::build_builtin(g, l).unwrap();
    serde_json::from_str(&b.to_json()).unwrap()
}

fn from_value(v: &Value) -> Block {
    Block::from_json(&v.to_string()).unwrap()
}

type Keyed = BTreeMap<(String, String), String>;

fn keyed(b: &Block, cols: &[BTreeMap<usize, impl ToString>]) -> Keyed {
    let mut out = BTreeMap::new();
    for (g, col) in cols.iter().enumerate() {
        for (&h, x) in col {
            out.insert((b.params[h].id.clone(), b.params[g].id.clone()), x.to_string());
        }
    }
    out
}

fn all_outputs(b: &Block) -> Vec<Keyed> {
    let r = duality::compute_duality(b).unwrap();
    let lvm = kl::compute_lvm(b, &r).unwrap();
    let m = hodgepoly::mixed_from_lvm(b, &lvm).unwrap();
    let h = hodgepoly::hodge_from_mixed(b, &m).unwrap();
    let c = hodgepoly::signature_from_hodge(b, &h).unwrap();
    vec![keyed(b, &r.cols), keyed(b, &lvm.cols), keyed(b, &m.cols), keyed(b, &h.cols), keyed(b, &c.cols)]
}

#[test]
fn flipped_grading_is_rejected() {
    for (g, l) in builders::builtin_blocks() {
        let mut v = block_json(g, l);
        let Some(orbit) = v["orbits"]
            .as_array_mut()
            .unwrap()
            .iter_mut()
            .find(|o| !o["grading"].as_array().unwrap().is_empty())
        else {
            continue;
        };
        let kind = &mut orbit["grading"][0]["kind"];
        *kind = if kind == "compact" { "noncompact".into() } else { "compact".into() };
        let b = from_value(&v);
        assert!(!b.validate().is_empty(), "{g} {l}");
        let rep = verify::run(&b, false);
        assert!(!rep.passed(), "{g} {l}");
        assert_eq!(rep.first_failure().unwrap().name, "validate");
    }
}

#[test]
fn flipped_case_label_breaks_the_engine() {
    let mut v = block_json("sl2r", "0");
    let e = v["edges"].as_array_mut().unwrap().iter_mut().find(|e| e["case"] == "nci-I").unwrap();
    e["case"] = "ci".into();
    e["targets"] = Value::Array(vec![e["param"].clone()]);
    let b = from_value(&v);
    assert!(!b.validate().is_empty());
    let relations = hecke::check_relations(&b).unwrap();
    let solved = oracle::compute_duality_oracle(&b);
    assert!(!relations.is_empty() || solved.is_err());
    if let Err(e) = solved {
        assert!(e.to_string().contains("infeasible") || e.to_string().contains("unique"), "{e}");
    }
}

#[test]
fn wrong_lvm_is_rejected() {
    let b = builders::build_builtin("complex:SL3", "0,0,0,0").unwrap();
    let r = duality::compute_duality(&b).unwrap();
    let lvm = kl::compute_lvm(&b, &r).unwrap();
    assert!(kl::verify_selfdual(&b, &r, &lvm).is_empty());
    assert!(!kl::verify_selfdual(&b, &r, &kl::Lvm::identity(b.len())).is_empty());
    assert!(!kl::verify_selfdual(&b, &r, &lvm.transpose()).is_empty());
}

#[test]
fn dim_h_cancels() {
    for (g, l) in [("sl2r", "0"), ("su21", "1/2,0"), ("gl2r", "1/2,1/2"), ("complex:SL3", "0,0,0,0")] {
        let v = block_json(g, l);
        let base = all_outputs(&from_value(&v));
        let mut w = v.clone();
        w["dimH"] = Value::from(w["dimH"].as_u64().unwrap() + 3);
        assert_eq!(all_outputs(&from_value(&w)), base, "{g} {l}");
    }
}

#[test]
fn type_two_labels_are_interchangeable() {
    for l in ["0,0", "1/2,1/2"] {
        let v = block_json("gl2r", l);
        let base = all_outputs(&from_value(&v));
        // swap which member of each type II pair comes first
        let mut w = v.clone();
        let mut swaps = Vec::new();
        for e in w["edges"].as_array_mut().unwrap() {
            if e["case"] == "nci-II" {
                let t = e["targets"].as_array_mut().unwrap();
                swaps.push((t[0].as_str().unwrap().to_string(), t[1].as_str().unwrap().to_string()));
                t.swap(0, 1);
            }
        }
        assert!(!swaps.is_empty());
        let params = w["parameters"].as_array_mut().unwrap();
        for (a, b) in &swaps {
            let i = params.iter().position(|p| p["id"] == a.as_str()).unwrap();
            let j = params.iter().position(|p| p["id"] == b.as_str()).unwrap();
            params.swap(i, j);
        }
        let b = from_value(&w);
        assert!(b.validate().is_empty(), "{:?}", b.validate());
        let ids = |b: &Block| b.params.iter().map(|p| p.id.clone()).collect::<Vec<_>>();
        assert_ne!(ids(&b), ids(&from_value(&v)));
        assert_eq!(all_outputs(&b), base, "gl2r {l}");
    }
}

#[test]
fn round_trip_is_bit_exact() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let s = b.to_json();
        let b2 = Block::from_json(&s).unwrap();
        assert_eq!(b2, b);
        assert_eq!(b2.to_json(), s, "{g} {l}");
    }
}
