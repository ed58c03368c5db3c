use lvh_core::{builders, duality, kl};

#[test]
fn builtins_validate() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap_or_else(|e| panic!("{g} {l}: {e}"));
        let v = b.validate();
        assert!(v.is_empty(), "{g} {l}: {v:#?}");
    }
}

#[test]
fn builtins_hecke_relations() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let f = lvh_core::hecke::check_relations(&b).unwrap();
        assert!(f.is_empty(), "{g} {l}: {f:#?}");
        let ops = lvh_core::hecke::HeckeOps::new(&b).unwrap();
        let h = lvh_core::hecke::hodge_rescaling_failures(&b, &ops);
        assert!(h.is_empty(), "{g} {l}: {h:#?}");
    }
}

#[test]
fn builtins_duality() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let r = lvh_core::duality::compute_duality(&b).unwrap_or_else(|e| panic!("{g} {l}: {e}"));
        let f = lvh_core::duality::check_duality(&b, &r).unwrap();
        assert!(f.is_empty(), "{g} {l}: {f:#?}");
    }
}

#[test]
fn builtins_oracle() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let r = lvh_core::duality::compute_duality(&b).unwrap();
        let o = lvh_core::oracle::compute_duality_oracle(&b).unwrap_or_else(|e| panic!("{g} {l}: {e}"));
        assert_eq!(r, o, "{g} {l}");
    }
}

#[test]
fn builtins_lvm() {
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let r = lvh_core::duality::compute_duality(&b).unwrap();
        let m = lvh_core::kl::compute_lvm(&b, &r).unwrap_or_else(|e| panic!("{g} {l}: {e}"));
        let f = lvh_core::kl::verify_selfdual(&b, &r, &m);
        assert!(f.is_empty(), "{g} {l}: {f:#?}");
    }
}

#[test]
fn sl2r_integral_values() {
    use lvh_core::poly::SignedULaurent;
    let b = builders::build_builtin("sl2r", "0").unwrap();
    let r = duality::compute_duality(&b).unwrap();
    let m = kl::compute_lvm(&b, &r).unwrap();
    let ix = |id: &str| b.params.iter().position(|p| p.id == id).unwrap();
    let (zero, inf, open, np) = (ix("0@0/0"), ix("inf@0/0"), ix("open@0/0"), ix("open@0/1"));
    let u_minus_1 = &SignedULaurent::u() - &SignedULaurent::one();
    assert_eq!(r.get(zero, open), u_minus_1);
    assert_eq!(r.get(inf, open), u_minus_1);
    assert_eq!(m.get(zero, open), SignedULaurent::one());
    assert_eq!(m.get(inf, open), SignedULaurent::one());
    assert!(m.get(zero, np).is_zero() && m.get(inf, np).is_zero());
    assert!(m.get(zero, inf).is_zero());
}

#[test]
fn complex_groups_match_classical_kl() {
    for (g, l) in builders::builtin_blocks() {
        if !g.starts_with("complex:") && g != "sl2c" {
            continue;
        }
        let b = builders::build_builtin(g, l).unwrap();
        if b.nonintegral_count(0) != 0 {
            continue;
        }
        let r = lvh_core::duality::compute_duality(&b).unwrap();
        let m = lvh_core::kl::compute_lvm(&b, &r).unwrap();
        assert_eq!(m, lvh_core::kl::classical::complex_group_lvm(&b).unwrap(), "{g} {l}");
    }
}

#[test]
fn builtins_signature_chain() {
    use lvh_core::hodgepoly::*;
    for (g, l) in builders::builtin_blocks() {
        let b = builders::build_builtin(g, l).unwrap();
        let r = duality::compute_duality(&b).unwrap();
        let lvm = kl::compute_lvm(&b, &r).unwrap();
        let mm = compare_signature(&b, &lvm).unwrap_or_else(|e| panic!("{g} {l}: {e}"));
        assert!(mm.is_empty(), "{g} {l}: {mm:?}");
    }
}

#[test]
fn sl2r_half_lengths() {
    use lvh_core::model::ThetaData;
    let b = builders::build_builtin("sl2r", "1/2").unwrap();
    let coroot = &b.root_datum.simple_coroots[0];
    for g in 0..b.len() {
        let l = b.lengths(g);
        assert_eq!((l.l2, l.li2), (2, 0));
        if ThetaData::sign_real(b.params[g].mu2, coroot) {
            // ε(m_α) = −1: ⌊3/2⌋ is odd, so the sign condition holds
            assert_eq!((l.lo2, l.lh2), (2, 1));
        } else {
            assert_eq!((l.lo2, l.lh2), (0, -1));
        }
        assert!(b.hodge_identity_holds(g));
    }
    let c = builders::build_builtin("sl2c", "0,0").unwrap();
    let closed = c.by_length().first().copied().unwrap();
    assert_eq!(c.lengths(closed).l2, 2);
}
