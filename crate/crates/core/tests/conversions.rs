use lvh_core::block::Block;
use lvh_core::hodgepoly::*;
use lvh_core::kl::Lvm;
use lvh_core::poly::{QuarterLaurent, SignedULaurent};
use lvh_core::table::{Format, Table};
use lvh_core::{builders, duality, kl};

fn pipeline(g: &str, l: &str) -> (Block, Lvm) {
    let b = builders::build_builtin(g, l).unwrap();
    let r = duality::compute_duality(&b).unwrap();
    let lvm = kl::compute_lvm(&b, &r).unwrap();
    (b, lvm)
}

#[test]
fn integral_mixed_is_lvm() {
    for (g, l) in [("sl2r", "0"), ("complex:SL3", "0,0,0,0"), ("su21", "0,0")] {
        let (b, lvm) = pipeline(g, l);
        assert_eq!(mixed_from_lvm(&b, &lvm).unwrap(), lvm, "{g}");
        let h = hodge_from_mixed(&b, &lvm).unwrap();
        for (col, hcol) in lvm.cols.iter().zip(&h.cols) {
            for (r, x) in col {
                assert_eq!(hcol[r], QuarterLaurent::from_mixed(x).unwrap());
            }
        }
    }
}

#[test]
fn nonintegral_sl2r_is_identity() {
    for l in ["1/2", "3/2", "-1/2", "1/3"] {
        let (b, lvm) = pipeline("sl2r", l);
        let id = Lvm::identity(b.len());
        assert_eq!(lvm, id);
        assert_eq!(mixed_from_lvm(&b, &lvm).unwrap(), id);
        let h = hodge_from_mixed(&b, &lvm).unwrap();
        for (g, col) in h.cols.iter().enumerate() {
            assert_eq!(col.len(), 1);
            assert_eq!(col[&g], QuarterLaurent::one());
        }
        assert_eq!(signature_chain(&b, &lvm).unwrap(), id);
        assert_eq!(signature_direct(&b, &lvm).unwrap(), id);
    }
}

#[test]
fn sl2r_integral_off_diagonal_hodge_entries_are_one() {
    let (b, lvm) = pipeline("sl2r", "0");
    let h = hodge_from_mixed(&b, &mixed_from_lvm(&b, &lvm).unwrap()).unwrap();
    let open = b.params.iter().position(|p| p.id == "open@0/0").unwrap();
    assert_eq!(h.cols[open].len(), 3);
    for x in h.cols[open].values() {
        assert_eq!(*x, QuarterLaurent::one());
    }
    let c = signature_direct(&b, &lvm).unwrap();
    for x in c.cols[open].values() {
        assert_eq!(zeta_parity(x), Some(false));
    }
}

#[test]
fn zeta_one_recovers_lvm() {
    for (g, l) in builders::builtin_blocks() {
        let (b, lvm) = pipeline(g, l);
        let c = signature_direct(&b, &lvm).unwrap();
        for (col, ccol) in lvm.cols.iter().zip(&c.cols) {
            assert_eq!(col.len(), ccol.len());
            for (r, x) in col {
                assert_eq!(ccol[r].at_zeta_one(), *x, "{g} {l}");
            }
        }
        for gg in 0..b.len() {
            assert_eq!(c.get(gg, gg), SignedULaurent::one());
        }
    }
}

#[test]
fn sl4_signature_has_zeta_terms() {
    let (b, lvm) = pipeline("complex:SL4", "0,0,0,0,0,0");
    let c = signature_chain(&b, &lvm).unwrap();
    let s2 = b.params.iter().position(|p| p.id == "s2@0/0").unwrap();
    let top = b.params.iter().position(|p| p.id == "s2s1s3s2@0/0").unwrap();
    let expect = &SignedULaurent::one() + &(&SignedULaurent::u() * &SignedULaurent::zeta());
    assert_eq!(c.get(s2, top), expect);
    assert_eq!(zeta_parity(&expect), None);
}

#[test]
fn tables_are_deterministic_and_well_formed() {
    let (b, lvm) = pipeline("su21", "0,0");
    let c = signature_chain(&b, &lvm).unwrap();
    for f in [Format::Json, Format::Csv, Format::Latex] {
        let a = Table::signature(&b, &c).render(f);
        let (b2, lvm2) = pipeline("su21", "0,0");
        let c2 = signature_chain(&b2, &lvm2).unwrap();
        assert_eq!(a, Table::signature(&b2, &c2).render(f));
    }
    let j: serde_json::Value = serde_json::from_str(&Table::signature(&b, &c).to_json()).unwrap();
    assert_eq!(j["advisory"]["regularity_unchecked"], true);
    assert_eq!(j["params"].as_array().unwrap().len(), b.len());
    assert!(j["entries"].as_array().unwrap().iter().all(|e| e["zeta_parity"].is_string()));
    let j: serde_json::Value = serde_json::from_str(&Table::lvm(&b, &lvm).to_json()).unwrap();
    assert!(j.get("advisory").is_none());
    assert!(j["entries"][0]["poly"][0]["p4"].is_i64());

    let csv = Table::lvm(&b, &lvm).to_csv();
    assert!(csv.starts_with("row,col,entry\n"));
    assert_eq!(csv.lines().count(), 1 + 13);

    let tex = Table::signature(&b, &c).to_latex();
    assert!(tex.starts_with("\\documentclass"));
    assert!(tex.trim_end().ends_with("\\end{document}"));
    assert_eq!(tex.matches("\\\\").count(), b.len() + 1);
    assert_eq!(tex.matches('{').count(), tex.matches('}').count());
}
