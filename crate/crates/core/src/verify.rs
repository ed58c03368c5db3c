//! The verification suite run by `lvh verify`.

use serde::Serialize;

use crate::block::Block;
use crate::duality::{check_duality, compute_duality, RMatrix};
use crate::hecke::{check_braid, check_quadratic, hodge_rescaling_failures, HeckeOps};
use crate::hodgepoly::compare_signature;
use crate::kl::{compute_lvm, verify_selfdual};
use crate::oracle::compute_duality_oracle;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub status: Status,
    /// First failure, or why the check was skipped.
    pub witness: Option<String>,
    pub failures: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.status == Status::Fail)
    }

    fn push(&mut self, name: &str, witnesses: Vec<String>) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: if witnesses.is_empty() { Status::Pass } else { Status::Fail },
            witness: witnesses.first().cloned(),
            failures: witnesses.len(),
        });
    }

    fn push_result(&mut self, name: &str, r: Result<Vec<String>>) {
        match r {
            Ok(w) => self.push(name, w),
            Err(e) => self.push(name, vec![e.to_string()]),
        }
    }

    fn skip(&mut self, name: &str, why: &str) {
        self.checks.push(CheckRecord {
            name: name.into(),
            status: Status::Skipped,
            witness: Some(why.into()),
            failures: 0,
        });
    }
}

fn fmt_rel(v: Vec<crate::hecke::RelationFailure>) -> Vec<String> {
    v.into_iter().map(|f| format!("{} at {}: {}", f.relation, f.param, f.difference)).collect()
}

fn r_mismatches(block: &Block, a: &RMatrix, b: &RMatrix) -> Vec<String> {
    let mut out = Vec::new();
    for g in 0..block.len() {
        for h in 0..block.len() {
            let (x, y) = (a.get(h, g), b.get(h, g));
            if x != y {
                out.push(format!(
                    "R[{}, {}]: recursion {x}, oracle {y}",
                    block.params[h].id, block.params[g].id
                ));
            }
        }
    }
    out
}

/// Run every check; computation errors count as failures of the check that hit them.
pub fn run(block: &Block, oracle: bool) -> Report {
    let mut rep = Report { checks: Vec::new() };
    let violations = block.validate();
    let valid = violations.is_empty();
    rep.push("validate", violations);
    if !valid {
        for name in [
            "hecke_quadratic",
            "hecke_braid",
            "length_identity",
            "hodge_rescaling",
            "duality",
            "oracle",
            "lvm",
            "signature",
        ] {
            if name != "oracle" || oracle {
                rep.skip(name, "block failed validation");
            }
        }
        return rep;
    }

    match HeckeOps::new(block) {
        Ok(ops) => {
            rep.push("hecke_quadratic", fmt_rel(check_quadratic(block, &ops)));
            rep.push_result("hecke_braid", check_braid(block, &ops).map(fmt_rel));
            rep.push("hodge_rescaling", fmt_rel(hodge_rescaling_failures(block, &ops)));
        }
        Err(e) => {
            for name in ["hecke_quadratic", "hecke_braid", "hodge_rescaling"] {
                rep.push(name, vec![e.to_string()]);
            }
        }
    }
    let identity = (0..block.len())
        .filter(|&g| !block.hodge_identity_holds(g))
        .map(|g| {
            let l = block.lengths(g);
            format!(
                "{}: 2l_H = {}, 2(l_o + l_I - l) = {}",
                block.params[g].id,
                l.lh2,
                l.lo2 + l.li2 - l.l2
            )
        })
        .collect();
    rep.push("length_identity", identity);

    let r = match compute_duality(block) {
        Ok(r) => r,
        Err(e) => {
            rep.push("duality", vec![e.to_string()]);
            if oracle {
                rep.skip("oracle", "duality failed");
            }
            rep.skip("lvm", "duality failed");
            rep.skip("signature", "duality failed");
            return rep;
        }
    };
    rep.push_result(
        "duality",
        check_duality(block, &r).map(|v| v.into_iter().map(|f| format!("{}: {}", f.check, f.witness)).collect()),
    );
    if oracle {
        rep.push_result("oracle", compute_duality_oracle(block).map(|o| r_mismatches(block, &r, &o)));
    }
    match compute_lvm(block, &r) {
        Ok(lvm) => {
            rep.push(
                "lvm",
                verify_selfdual(block, &r, &lvm).into_iter().map(|f| format!("{}: {}", f.check, f.witness)).collect(),
            );
            rep.push_result(
                "signature",
                compare_signature(block, &lvm).map(|v| {
                    v.into_iter().map(|m| format!("[{}, {}]: chain {}, direct {}", m.row, m.col, m.chain, m.direct)).collect()
                }),
            );
        }
        Err(e) => {
            rep.push("lvm", vec![e.to_string()]);
            rep.skip("signature", "LVM failed");
        }
    }
    rep
}
