//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::process::ExitCode;
use std::time::Instant;

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use lvh_core::block::Block;
use lvh_core::hecke::{self, HeckeOps};
use lvh_core::kl::{self, classical};
use lvh_core::model::ThetaData;
use lvh_core::poly::QuarterLaurent;
use lvh_core::table::{Format, Table};
use lvh_core::{builders, duality, hodgepoly, oracle, verify};

struct Built {
    name: String,
    block: Block,
}

fn blocks() -> Vec<Built> {
    builders::builtin_blocks()
        .into_iter()
        .map(|(g, l)| Built {
            name: format!("{g} @ {l}"),
            block: builders::build_builtin(g, l).unwrap_or_else(|e| panic!("{g} {l}: {e}")),
        })
        .collect()
}

/// Collects the first few witnesses of a criterion.
#[derive(Default)]
struct Outcome {
    checked: usize,
    failures: Vec<String>,
}

impl Outcome {
    fn fail(&mut self, w: String) {
        self.failures.push(w);
    }

    fn check(&mut self, ok: bool, w: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(w());
        }
    }
}

fn c1(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        match HeckeOps::new(&b.block) {
            Ok(ops) => {
                let f = hecke::check_quadratic(&b.block, &ops);
                o.check(f.is_empty(), || format!("{}: {:?}", b.name, f[0]));
            }
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c2(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs.iter().filter(|b| b.block.n_simple() >= 2) {
        let ops = HeckeOps::new(&b.block).unwrap();
        match hecke::check_braid(&b.block, &ops) {
            Ok(f) => o.check(f.is_empty(), || format!("{}: {:?}", b.name, f[0])),
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c3(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        match duality::compute_duality(&b.block).and_then(|r| duality::check_duality(&b.block, &r)) {
            Ok(f) => o.check(f.is_empty(), || format!("{}: {} {}", b.name, f[0].check, f[0].witness)),
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c4(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        let r = duality::compute_duality(&b.block);
        let s = oracle::compute_duality_oracle(&b.block);
        match (r, s) {
            (Ok(r), Ok(s)) => o.check(r.cols == s.cols, || format!("{}: recursion and oracle differ", b.name)),
            (Err(e), _) | (_, Err(e)) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c5(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        let r = duality::compute_duality(&b.block).unwrap();
        match kl::compute_lvm(&b.block, &r) {
            Ok(lvm) => {
                let f = kl::verify_selfdual(&b.block, &r, &lvm);
                o.check(f.is_empty(), || format!("{}: {} {}", b.name, f[0].check, f[0].witness));
                if (b.name.starts_with("complex:") || b.name.starts_with("sl2c ")) && (0..b.block.n_simple()).all(|i| b.block.integral(0, i)) {
                    match classical::complex_group_lvm(&b.block) {
                        Ok(c) => o.check(c == lvm, || format!("{}: classical KL mismatch", b.name)),
                        Err(e) => o.fail(format!("{}: {e}", b.name)),
                    }
                }
            }
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c6(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        let ops = HeckeOps::new(&b.block).unwrap();
        let f = hecke::hodge_rescaling_failures(&b.block, &ops);
        o.check(f.is_empty(), || format!("{}: {:?}", b.name, f[0]));
    }
    o
}

fn c7(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        let r = duality::compute_duality(&b.block).unwrap();
        let lvm = kl::compute_lvm(&b.block, &r).unwrap();
        match hodgepoly::compare_signature(&b.block, &lvm) {
            Ok(m) => o.check(m.is_empty(), || format!("{}: {:?}", b.name, m[0])),
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn c8(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    for b in bs {
        for g in 0..b.block.len() {
            o.check(b.block.hodge_identity_holds(g), || format!("{}: {}", b.name, b.block.params[g].id));
        }
    }
    o
}

/// Whether the `t1` (Hodge degree 0) branch is taken, read off from the Hodge filtration
/// of the rank-one local system with monodromy exponents `μ1 + μ2 = a`, `μ1 − μ2 = d`.
fn filtration_says_t1(a: &BigRational, lambda_sign_negative: bool) -> bool {
    let two = BigRational::from_integer(2.into());
    let d = if lambda_sign_negative { BigRational::one() } else { BigRational::zero() };
    let mu1 = (a + &d) / &two;
    let mu2 = (a - &d) / &two;
    // shift each exponent into (−1, 0)
    let reduce = |m: BigRational| {
        let f = m.floor();
        m - f - BigRational::one()
    };
    let s = reduce(mu1) + reduce(mu2);
    let (lo, hi) = (BigRational::from_integer((-2).into()), BigRational::from_integer((-1).into()));
    lo < s && s < hi
}

fn c9() -> Outcome {
    let mut o = Outcome::default();
    for (l, expect) in [("1/2", (1, 2)), ("3/2", (3, 2)), ("-1/2", (-1, 2))] {
        let block = builders::build_builtin("sl2r", l).unwrap();
        let ops = HeckeOps::new(&block).unwrap();
        let coroot = &block.root_datum.simple_coroots[0];
        let mut signs = Vec::new();
        for g in 0..block.len() {
            let a = block.lambda(g).pair(coroot);
            o.check(a == BigRational::new(expect.0.into(), expect.1.into()), || format!("λ = {l}: pairing {a}"));
            let negative = ThetaData::sign_real(block.params[g].mu2, coroot);
            signs.push(negative);
            let floor_odd = a.floor().to_integer().is_odd();
            let by_rule = floor_odd == negative;
            let by_filtration = filtration_says_t1(&a, negative);
            o.check(by_rule == by_filtration, || format!("λ = {l}: sign rule and filtration disagree"));
            let col = &ops.cols[0][g];
            let want = if by_filtration { QuarterLaurent::t1() } else { QuarterLaurent::t2() };
            o.check(col.len() == 1 && col.values().next() == Some(&want), || {
                format!("λ = {l}, {}: T column {:?}, expected {want}", block.params[g].id, col)
            });
        }
        signs.sort();
        o.check(signs == [false, true], || format!("λ = {l}: both signs not present"));
    }
    o
}

fn render_all(b: &Block) -> String {
    let r = duality::compute_duality(b).unwrap();
    let lvm = kl::compute_lvm(b, &r).unwrap();
    let m = hodgepoly::mixed_from_lvm(b, &lvm).unwrap();
    let h = hodgepoly::hodge_from_mixed(b, &m).unwrap();
    let c = hodgepoly::signature_from_hodge(b, &h).unwrap();
    let mut out = String::new();
    for t in [Table::r(b, &r), Table::lvm(b, &lvm), Table::mixed(b, &m), Table::hodge(b, &h), Table::signature(b, &c)] {
        for f in [Format::Json, Format::Csv, Format::Latex] {
            out.push_str(&t.render(f));
        }
    }
    out.push_str(&serde_json::to_string(&verify::run(b, false)).unwrap());
    out
}

fn c10(bs: &[Built]) -> Outcome {
    let mut o = Outcome::default();
    let single = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    for b in bs {
        let s = b.block.to_json();
        match Block::from_json(&s) {
            Ok(b2) => {
                o.check(b2 == b.block && b2.to_json() == s, || format!("{}: save/load not identity", b.name));
                let first = render_all(&b.block);
                o.check(render_all(&b2) == first, || format!("{}: reloaded output differs", b.name));
                o.check(single.install(|| render_all(&b.block)) == first, || {
                    format!("{}: single-threaded output differs", b.name)
                });
            }
            Err(e) => o.fail(format!("{}: {e}", b.name)),
        }
    }
    o
}

fn main() -> ExitCode {
    let start = Instant::now();
    let bs = blocks();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("Hecke quadratic relations, every block and simple root", Box::new(|| c1(&bs))),
        ("braid relations on rank-2 blocks", Box::new(|| c2(&bs))),
        ("duality: involution, unitriangular, degree bound, commutation", Box::new(|| c3(&bs))),
        ("recursive duality equals the linear-system oracle", Box::new(|| c4(&bs))),
        ("LVM unitriangular, degree bound, round trip, classical KL", Box::new(|| c5(&bs))),
        ("Hodge rescaling of Hecke matrices is integral", Box::new(|| c6(&bs))),
        ("signature chain equals the direct formula", Box::new(|| c7(&bs))),
        ("length identity for every parameter", Box::new(|| c8(&bs))),
        ("SL(2,R) non-integral T coefficients match the Hodge filtration", Box::new(c9)),
        ("save/load identity and byte-identical reruns", Box::new(|| c10(&bs))),
    ];
    let mut ok = true;
    for (i, (what, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        let pass = o.failures.is_empty() && o.checked > 0;
        ok &= pass;
        println!(
            "{} criterion {:>2}: {what} ({} checks, {:.2?})",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.checked,
            t.elapsed()
        );
        for w in o.failures.iter().take(3) {
            println!("      {w}");
        }
    }
    println!("acceptance: {} blocks, {:.2?}", bs.len(), start.elapsed());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
