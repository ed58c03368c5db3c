//! Deterministic JSON / CSV / LaTeX emitters for R, LVM, LVM^m, LVM^h and LVM^c.
//!
//! Rows are `γ'`, columns are `γ`, both in block order. Zero entries are omitted
//! from JSON and CSV.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde_json::{json, Value};

use crate::block::Block;
use crate::duality::RMatrix;
use crate::hecke::Column;
use crate::hodgepoly::{zeta_parity, HodgeMatrix};
use crate::kl::Lvm;
use crate::poly::{QuarterLaurent, SignedULaurent};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "latex" | "tex" => Ok(Format::Latex),
            _ => Err(Error::Domain(format!("unknown format {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    R,
    Lvm,
    Mixed,
    Hodge,
    Signature,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::R => "R",
            Kind::Lvm => "LVM",
            Kind::Mixed => "LVM^m",
            Kind::Hodge => "LVM^h",
            Kind::Signature => "LVM^c",
        }
    }

    fn latex_name(self) -> &'static str {
        match self {
            Kind::R => "R",
            Kind::Lvm => "\\mathrm{LVM}",
            Kind::Mixed => "\\mathrm{LVM}^m",
            Kind::Hodge => "\\mathrm{LVM}^h",
            Kind::Signature => "\\mathrm{LVM}^c",
        }
    }
}

#[derive(Clone, Debug)]
enum Entry {
    U(SignedULaurent),
    H(QuarterLaurent),
}

impl Entry {
    fn text(&self) -> String {
        match self {
            Entry::U(p) => p.to_string(),
            Entry::H(p) => p.to_string(),
        }
    }

    /// ζ-free entries are serialized as `{p4, q4, coeff}` records with `u = t1 t2`.
    fn poly_json(&self) -> Value {
        let v = match self {
            Entry::U(p) if !p.has_zeta() => serde_json::to_value(QuarterLaurent::from_mixed(p).expect("ζ-free")),
            Entry::U(p) => serde_json::to_value(p),
            Entry::H(p) => serde_json::to_value(p),
        };
        v.expect("polynomials serialize")
    }

    fn latex(&self) -> String {
        match self {
            Entry::U(p) => latex_terms(p.terms().map(|(&(h, z), c)| {
                let mut m = latex_power("u", h, 2);
                if z {
                    m.push_str("\\zeta");
                }
                (m, c)
            })),
            Entry::H(p) => latex_terms(p.terms().map(|(&(a, b), c)| {
                (format!("{}{}", latex_power("t_1", a, 4), latex_power("t_2", b, 4)), c)
            })),
        }
    }
}

fn parity_label(p: &SignedULaurent) -> &'static str {
    match zeta_parity(p) {
        Some(false) => "0",
        Some(true) => "1",
        None => "mixed",
    }
}

fn latex_power(var: &str, num: i64, den: i64) -> String {
    if num == 0 {
        return String::new();
    }
    let g = num_integer::gcd(num.abs(), den);
    let (n, d) = (num / g, den / g);
    match (n, d) {
        (1, 1) => var.to_string(),
        (_, 1) => format!("{var}^{{{n}}}"),
        _ => format!("{var}^{{{n}/{d}}}"),
    }
}

fn latex_terms<'a>(terms: impl Iterator<Item = (String, &'a BigInt)>) -> String {
    let mut out = String::new();
    for (mono, c) in terms {
        let abs = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        if mono.is_empty() {
            let _ = write!(out, "{abs}");
        } else if abs.is_one() {
            out.push_str(&mono);
        } else {
            let _ = write!(out, "{abs}{mono}");
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn latex_escape(s: &str) -> String {
    let mut out = String::new();
    for ch in s.chars() {
        match ch {
            '_' | '#' | '&' | '%' | '$' | '{' | '}' => {
                out.push('\\');
                out.push(ch);
            }
            '^' => out.push_str("\\^{}"),
            '~' => out.push_str("\\~{}"),
            '\\' => out.push_str("\\textbackslash{}"),
            _ => out.push(ch),
        }
    }
    out
}

/// A square table indexed by the parameters of one block.
#[derive(Clone, Debug)]
pub struct Table {
    pub kind: Kind,
    pub ids: Vec<String>,
    pub lambda: Vec<String>,
    root_datum: Option<String>,
    cols: Vec<Column<Entry>>,
}

impl Table {
    fn new(kind: Kind, block: &Block, cols: Vec<Column<Entry>>) -> Self {
        Table {
            kind,
            ids: block.params.iter().map(|p| p.id.clone()).collect(),
            lambda: block.base_lambda.0.iter().map(|x| x.to_string()).collect(),
            root_datum: block.root_datum.name.clone(),
            cols,
        }
    }

    fn signed(kind: Kind, block: &Block, cols: &[Column<SignedULaurent>]) -> Self {
        let cols = cols
            .iter()
            .map(|c| c.iter().filter(|(_, p)| !p.is_zero()).map(|(&r, p)| (r, Entry::U(p.clone()))).collect())
            .collect();
        Self::new(kind, block, cols)
    }

    pub fn r(block: &Block, r: &RMatrix) -> Self {
        Self::signed(Kind::R, block, &r.cols)
    }

    pub fn lvm(block: &Block, m: &Lvm) -> Self {
        Self::signed(Kind::Lvm, block, &m.cols)
    }

    pub fn mixed(block: &Block, m: &Lvm) -> Self {
        Self::signed(Kind::Mixed, block, &m.cols)
    }

    pub fn signature(block: &Block, m: &Lvm) -> Self {
        Self::signed(Kind::Signature, block, &m.cols)
    }

    pub fn hodge(block: &Block, m: &HodgeMatrix) -> Self {
        let cols = m
            .cols
            .iter()
            .map(|c| c.iter().filter(|(_, p)| !p.is_zero()).map(|(&r, p)| (r, Entry::H(p.clone()))).collect())
            .collect();
        Self::new(Kind::Hodge, block, cols)
    }

    fn entries(&self) -> impl Iterator<Item = (usize, usize, &Entry)> {
        let n = self.ids.len();
        (0..n).flat_map(move |r| (0..n).filter_map(move |c| self.cols[c].get(&r).map(|e| (r, c, e))))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Latex => self.to_latex(),
        }
    }

    pub fn to_json(&self) -> String {
        let entries: Vec<Value> = self
            .entries()
            .map(|(r, c, e)| {
                let mut v = json!({
                    "row": self.ids[r],
                    "col": self.ids[c],
                    "poly": e.poly_json(),
                    "text": e.text(),
                });
                if let (Kind::Signature, Entry::U(p)) = (self.kind, e) {
                    v["zeta_parity"] = json!(parity_label(p));
                }
                v
            })
            .collect();
        let mut doc = json!({
            "kind": self.kind.as_str(),
            "root_datum": self.root_datum,
            "lambda": self.lambda,
            "params": self.ids,
            "entries": entries,
        });
        if self.kind == Kind::Signature {
            doc["advisory"] = json!({ "regularity_unchecked": true });
        }
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let sig = self.kind == Kind::Signature;
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["row", "col", "entry"];
        if sig {
            header.push("zeta_parity");
        }
        w.write_record(&header).expect("csv");
        for (r, c, e) in self.entries() {
            let mut rec = vec![self.ids[r].clone(), self.ids[c].clone(), e.text()];
            if let (true, Entry::U(p)) = (sig, e) {
                rec.push(parity_label(p).to_string());
            }
            w.write_record(&rec).expect("csv");
        }
        String::from_utf8(w.into_inner().expect("csv")).expect("utf-8")
    }

    pub fn to_latex(&self) -> String {
        let n = self.ids.len();
        let mut s = String::new();
        s.push_str("\\documentclass[border=4pt]{standalone}\n\\usepackage{amsmath}\n\\begin{document}\n");
        let _ = writeln!(
            s,
            "% {} for {} at lambda = ({}); rows gamma', columns gamma",
            self.kind.as_str(),
            self.root_datum.as_deref().unwrap_or("block"),
            self.lambda.join(", ")
        );
        if self.kind == Kind::Signature {
            s.push_str("% advisory: regularity_unchecked; [k] marks zeta-parity k of each entry\n");
        }
        let _ = writeln!(s, "$\\begin{{array}}{{r|{}}}", "c".repeat(n));
        let head: Vec<String> = self.ids.iter().map(|i| format!("\\text{{{}}}", latex_escape(i))).collect();
        let _ = writeln!(s, "{} & {} \\\\ \\hline", self.kind.latex_name(), head.join(" & "));
        for r in 0..n {
            let row: Vec<String> = (0..n)
                .map(|c| match self.cols[c].get(&r) {
                    None => "0".to_string(),
                    Some(e) => match (self.kind, e) {
                        (Kind::Signature, Entry::U(p)) => format!("{}\\,[{}]", e.latex(), parity_label(p)),
                        _ => e.latex(),
                    },
                })
                .collect();
            let _ = writeln!(s, "\\text{{{}}} & {} \\\\", latex_escape(&self.ids[r]), row.join(" & "));
        }
        s.push_str("\\end{array}$\n\\end{document}\n");
        s
    }
}

/// Number of nonzero entries, used in summaries.
pub fn nonzero_count(t: &Table) -> usize {
    t.entries().count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn latex_polys() {
        let p = &SignedULaurent::one() - &SignedULaurent::u();
        assert_eq!(Entry::U(p).latex(), "1 - u");
        let q = &QuarterLaurent::monomial(2, -2, 1) + &QuarterLaurent::t1().scale(&BigInt::from(-3));
        assert_eq!(Entry::H(q).latex(), "t_1^{1/2}t_2^{-1/2} - 3t_1");
        assert_eq!(Entry::U(SignedULaurent::zero()).latex(), "0");
    }

    #[test]
    fn escape() {
        assert_eq!(latex_escape("a_b#1"), "a\\_b\\#1");
    }
}
