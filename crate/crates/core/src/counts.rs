//! Closed-form orbit counts `|W ∩ O_i|` as polynomials in `q`.
//!
//! Pairs of forms use the subspaces `W_[i,j]` (id `Wij`): the last `i`
//! coordinates of `A` and the last `j` of `B` are free. Their counts come
//! from the single-form tables, the cross multiplier tables and the two
//! inclusion–exclusion steps
//!
//! ```text
//! W_[i,j] = W×_[i,j] + W_[i-1,j] + W_[i,j-1] − W_[i-1,j-1]     (i < j)
//! W_[i,i] = W×_[i,i] + (q+1)·W_[i-2,i] − q·W_[i-2,i-2]
//! ```
//!
//! Subspaces fixed by point conditions use the zero-count formula
//! `|W ∩ O_i| = |O_i|·n_i(n_i−1)…/(N(N−1)…)` where `N = |P^{n-1}|`.

use std::collections::BTreeMap;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::OnceLock;

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactla::BigRational;
use crate::poly::{parse, QPolynomial};
use crate::reps::{OrbitLabel, RepKind};

/// One subspace with its orbit counts, possibly split by `q mod m`.
#[derive(Clone, Debug, Serialize)]
pub struct CountEntry {
    pub id: String,
    /// Pattern such as `0**0` or `00000*|00*0**`.
    pub mask: String,
    pub dim: usize,
    /// `(class, counts)`; class `None` means valid for every `q`.
    pub classes: Vec<(Option<u64>, Vec<QPolynomial>)>,
}

impl CountEntry {
    pub fn mask_bits(&self) -> Vec<bool> {
        parse_mask(&self.mask).expect("built-in masks are valid")
    }

    pub fn counts_for_class(&self, class: u64) -> Option<&[QPolynomial]> {
        self.classes
            .iter()
            .find(|(c, _)| c.is_none() || *c == Some(class))
            .map(|(_, v)| v.as_slice())
    }
}

/// All closed-form count entries of one representation.
#[derive(Clone, Debug, Serialize)]
pub struct CountTable {
    pub rep: RepKind,
    pub entries: Vec<CountEntry>,
}

impl CountTable {
    pub fn entry(&self, id: &str) -> Result<&CountEntry> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .ok_or_else(|| Error::UnknownSubspace(id.to_string()))
    }

    /// Count polynomials of `id` valid for `q`.
    pub fn counts(&self, id: &str, q: u64) -> Result<&[QPolynomial]> {
        let class = self.rep.class_of(q);
        self.entry(id)?.counts_for_class(class).ok_or_else(|| {
            Error::InvalidArgument(format!("{id} has no counts for q ≡ {class} mod {}", self.rep.modulus()))
        })
    }

    pub fn evaluate(&self, id: &str, q: u64) -> Result<Vec<BigRational>> {
        Ok(self.counts(id, q)?.iter().map(|p| p.eval_int(q as i64)).collect())
    }

    /// CSV rows `subspace,orbit,polynomial,value` for the classes matching `q`.
    pub fn to_csv(&self, q: u64) -> String {
        let labels = &self.rep.descriptor().labels;
        let mut out = String::from("subspace,orbit,polynomial,value\n");
        for e in &self.entries {
            let Some(v) = e.counts_for_class(self.rep.class_of(q)) else {
                continue;
            };
            for (l, p) in labels.iter().zip(v) {
                let _ = writeln!(out, "{},\"{}\",\"{}\",{}", e.id, l, p, p.eval_int(q as i64));
            }
        }
        out
    }
}

/// Parses `0**0`, `000|0**` and the like into a coordinate mask.
pub fn parse_mask(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .filter(|&c| c != '|' && !c.is_whitespace())
        .map(|c| match c {
            '0' => Ok(false),
            '*' | '1' => Ok(true),
            _ => Err(Error::Parse(format!("bad mask character '{c}' in '{s}'"))),
        })
        .collect()
}

/// Inverse of [`parse_mask`], with `|` between the two forms of a pair.
pub fn format_mask(kind: RepKind, mask: &[bool]) -> String {
    let half = match kind {
        RepKind::Pair22 | RepKind::Pair23 => Some(kind.dim() / 2),
        _ => None,
    };
    let mut s = String::new();
    for (k, &b) in mask.iter().enumerate() {
        if Some(k) == half {
            s.push('|');
        }
        s.push(if b { '*' } else { '0' });
    }
    s
}

fn p(s: &str) -> QPolynomial {
    parse(s).expect("built-in polynomial")
}

/// Dense count vector from `(label, expression)` pairs.
fn sparse(kind: RepKind, items: &[(OrbitLabel, &str)]) -> Vec<QPolynomial> {
    let d = kind.descriptor();
    let mut v = vec![QPolynomial::zero(); d.orbit_count()];
    for &(l, e) in items {
        v[d.index_of(l).expect("label of this rep")] = p(e);
    }
    v
}

fn dense(src: &[&str]) -> Vec<QPolynomial> {
    src.iter().map(|s| p(s)).collect()
}

fn add(a: &[QPolynomial], b: &[QPolynomial]) -> Vec<QPolynomial> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[QPolynomial], b: &[QPolynomial]) -> Vec<QPolynomial> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn mul(c: &QPolynomial, a: &[QPolynomial]) -> Vec<QPolynomial> {
    a.iter().map(|x| c * x).collect()
}

/// `|O_i| · n_i(n_i−1)…(n_i−k+1) / (N(N−1)…(N−k+1))` with `N = n_0`.
pub fn zero_formula_counts(kind: RepKind, points: usize) -> Result<Vec<QPolynomial>> {
    let d = kind.descriptor();
    let falling = |n: &QPolynomial| {
        (0..points).fold(QPolynomial::one(), |acc, t| {
            &acc * &(n - &QPolynomial::from_int(t as i64))
        })
    };
    let denom = falling(&d.zeros[0]);
    d.sizes
        .iter()
        .zip(&d.zeros)
        .map(|(s, n)| {
            (s * &falling(n))
                .div_exact(&denom)
                .ok_or_else(|| Error::Inconsistent(format!("zero-count formula does not divide for {kind} ({n})")))
        })
        .collect()
}

/// Counts of `W_[0,j]`: a single form in the last `j` coordinates of `B`,
/// with the single-form orbits relabelled as the dependent pair orbits.
fn single_form_base(kind: RepKind, j: usize) -> Vec<QPolynomial> {
    let r = kind.descriptor().orbit_count();
    let rows: &[&str] = match (kind, j) {
        (_, 0) => &["1"],
        (_, 1) => &["1", "q-1"],
        (_, 2) => &["1", "q-1", "q(q-1)"],
        (_, 3) => &["1", "q^2-1", "q(q^2-1)/2", "q(q-1)^2/2"],
        (RepKind::Pair23, 4) => &["1", "q^2-1", "q(q-1)(3q+1)/2", "q(q-1)^2/2", "q^2(q-1)^2"],
        (RepKind::Pair23, 5) => &["1", "q^2-1", "(2q+1)q(q^2-1)/2", "q(q-1)^2/2", "q^2(q^2-1)(q-1)"],
        (RepKind::Pair23, 6) => &["1", "q^3-1", "q(q^3-1)(q+1)/2", "q(q^3-1)(q-1)/2", "(q^5-q^2)(q-1)"],
        _ => unreachable!("no W_[0,{j}] for {kind}"),
    };
    let mut v = dense(rows);
    v.resize(r, QPolynomial::zero());
    v
}

/// `W×_[i,j]` as multiplier times the orbit counts of the reduced set `Y`.
pub fn cross_contribution(kind: RepKind, i: usize, j: usize) -> Result<Vec<QPolynomial>> {
    use OrbitLabel::*;
    let rank2 = [(Cs, "1"), (Ts, "(q-1)/2"), (Ti, "(q-1)/2")];
    let (multiplier, y): (&str, Vec<(OrbitLabel, &str)>) = match (i, j) {
        (1, 2) => ("q(q-1)^2", vec![(Cs, "1")]),
        (1, 3) => ("q^2(q-1)^2", vec![(Ts, "1")]),
        (2, 2) => ("(q^2-1)(q^2-q)", vec![(Cs, "1")]),
        (2, 3) => ("q^2(q-1)^2", rank2.to_vec()),
        (3, 3) => ("q(q^2-1)(q^2-q)", rank2.to_vec()),
        _ if kind != RepKind::Pair23 => return Err(Error::UnknownSubspace(format!("W×_[{i},{j}] for {kind}"))),
        (1, 4) => ("q^2(q-1)^2", vec![(Cs, "1"), (Q1e4, "q-1")]),
        (1, 5) => ("q^4(q-1)^2", vec![(Q1e2x1e2, "1")]),
        (1, 6) => (
            "q^3(q-1)^2",
            vec![(Ts, "1"), (Q1e4, "q-1"), (Q1e2x1e2, "q(q-1)/2"), (Q2e2, "q(q-1)/2")],
        ),
        (2, 4) => ("q^3(q-1)^2", vec![(Cns, "1"), (Q1e3x1, "q-1")]),
        (2, 5) => ("q^3(q-1)^2", vec![(Cns, "1"), (Q1e3x1, "q-1"), (Q1e2x11, "q(q-1)")]),
        (2, 6) => (
            "q^4(q-1)^2",
            vec![
                (Q1e2x1e2, "1"),
                (Q1e2x11, "q-1"),
                (Q1e2x2, "q-1"),
                (Q1111, "(q-1)^2/4"),
                (Q112, "(q-1)^2/2"),
                (Q22, "(q-1)^2/4"),
            ],
        ),
        (4, 4) => (
            "q^3(q^2-1)(q^2-q)",
            vec![(Q1e2x1e2, "1"), (Q1e2x11, "(q-1)/2"), (Q1e2x2, "(q-1)/2")],
        ),
        _ => return Err(Error::UnknownSubspace(format!("W×_[{i},{j}] for {kind}"))),
    };
    Ok(mul(&p(multiplier), &sparse(kind, &y)))
}

/// Counts of `W_[i,j]` (`i ≤ j`) by the inclusion–exclusion recursion.
pub fn derive_wij(kind: RepKind, i: usize, j: usize) -> Result<Vec<QPolynomial>> {
    let mut memo = HashMap::new();
    derive_memo(kind, i, j, &mut memo)
}

fn derive_memo(
    kind: RepKind,
    i: usize,
    j: usize,
    memo: &mut HashMap<(usize, usize), Vec<QPolynomial>>,
) -> Result<Vec<QPolynomial>> {
    let n = match kind {
        RepKind::Pair22 => 3,
        RepKind::Pair23 => 6,
        _ => return Err(Error::UnsupportedInvariant("W_[i,j] recursion")),
    };
    if i > j || j > n {
        return Err(Error::UnknownSubspace(format!("W_[{i},{j}]")));
    }
    if let Some(v) = memo.get(&(i, j)) {
        return Ok(v.clone());
    }
    let v = if i == 0 {
        single_form_base(kind, j)
    } else if i == 1 && j == 1 {
        sparse(kind, &[(OrbitLabel::Zero, "1"), (OrbitLabel::D1Sq, "q^2-1")])
    } else if i == j {
        let x = cross_contribution(kind, i, i)?;
        let a = derive_memo(kind, i - 2, i, memo)?;
        let b = derive_memo(kind, i - 2, i - 2, memo)?;
        let q1 = QPolynomial::linear(-1);
        add(&x, &sub(&mul(&q1, &a), &mul(&QPolynomial::q(), &b)))
    } else {
        let x = cross_contribution(kind, i, j)?;
        let a = derive_memo(kind, i - 1, j, memo)?;
        let b = derive_memo(kind, i, j - 1, memo)?;
        let c = derive_memo(kind, i - 1, j - 1, memo)?;
        add(&x, &sub(&add(&a, &b), &c))
    };
    memo.insert((i, j), v.clone());
    Ok(v)
}

fn wij_mask(n: usize, i: usize, j: usize) -> String {
    let side = |k: usize| "0".repeat(n - k) + &"*".repeat(k);
    format!("{}|{}", side(i), side(j))
}

fn entry(id: &str, mask: &str, counts: Vec<QPolynomial>) -> CountEntry {
    CountEntry {
        id: id.to_string(),
        mask: mask.to_string(),
        dim: parse_mask(mask).expect("built-in mask").iter().filter(|&&b| b).count(),
        classes: vec![(None, counts)],
    }
}

fn build_table(kind: RepKind) -> Result<CountTable> {
    use OrbitLabel::*;
    let d = kind.descriptor();
    let sizes = d.sizes.clone();
    let mut entries = Vec::new();
    match kind {
        RepKind::Sym32 => {
            entries.push(entry("W0", "0000", sparse(kind, &[(Zero, "1")])));
            entries.push(entry("W1", "000*", sparse(kind, &[(Zero, "1"), (Cube, "q-1")])));
            entries.push(entry(
                "W2",
                "00**",
                sparse(kind, &[(Zero, "1"), (Cube, "q-1"), (SquareLinear, "q(q-1)")]),
            ));
            entries.push(entry(
                "W3",
                "0**0",
                sparse(kind, &[(Zero, "1"), (SquareLinear, "2(q-1)"), (ThreeLinear, "(q-1)^2")]),
            ));
            entries.push(CountEntry {
                id: "W3perp".into(),
                mask: "*00*".into(),
                dim: 2,
                classes: vec![
                    (
                        Some(1),
                        sparse(
                            kind,
                            &[
                                (Zero, "1"),
                                (Cube, "2(q-1)"),
                                (ThreeLinear, "(q-1)^2/3"),
                                (Cubic, "2(q-1)^2/3"),
                            ],
                        ),
                    ),
                    (
                        Some(2),
                        sparse(kind, &[(Zero, "1"), (Cube, "2(q-1)"), (QuadLinear, "(q-1)^2")]),
                    ),
                ],
            });
            entries.push(entry("W1perp", "***0", zero_formula_counts(kind, 1)?));
            entries.push(entry("V", "****", sizes));
        }
        RepKind::Sym22 => {
            entries.push(entry("W0", "000", sparse(kind, &[(Zero, "1")])));
            entries.push(entry("W1", "00*", sparse(kind, &[(Zero, "1"), (Square, "q-1")])));
            entries.push(entry(
                "W2",
                "0**",
                sparse(kind, &[(Zero, "1"), (Square, "q-1"), (Split, "q^2-q")]),
            ));
            entries.push(entry("V", "***", sizes));
        }
        RepKind::Sym23 => {
            entries.push(entry("W0", "000000", sparse(kind, &[(Zero, "1")])));
            entries.push(entry("W1", "00000*", sparse(kind, &[(Zero, "1"), (Square, "q-1")])));
            entries.push(entry(
                "W2",
                "000*0*",
                sparse(
                    kind,
                    &[
                        (Zero, "1"),
                        (Square, "2q-2"),
                        (Split, "(q-1)^2/2"),
                        (Nonsplit, "(q-1)^2/2"),
                    ],
                ),
            ));
            entries.push(entry(
                "W3",
                "00****",
                sparse(
                    kind,
                    &[
                        (Zero, "1"),
                        (Square, "q^2-1"),
                        (Split, "q(3q^2-2q-1)/2"),
                        (Nonsplit, "q(q-1)^2/2"),
                        (Nonsingular, "q^2(q-1)^2"),
                    ],
                ),
            ));
            entries.push(entry("W1perp", "*****0", zero_formula_counts(kind, 1)?));
            entries.push(entry("W2perp", "***0*0", zero_formula_counts(kind, 2)?));
            entries.push(entry("V", "******", sizes));
        }
        RepKind::Pair22 | RepKind::Pair23 => {
            let n = kind.dim() / 2;
            let mut memo = HashMap::new();
            let pairs: Vec<(usize, usize)> = if kind == RepKind::Pair22 {
                (0..=3).flat_map(|i| (i..=3).map(move |j| (i, j))).collect()
            } else {
                vec![
                    (0, 0),
                    (0, 1),
                    (0, 2),
                    (0, 3),
                    (0, 4),
                    (0, 5),
                    (0, 6),
                    (1, 1),
                    (1, 2),
                    (1, 3),
                    (1, 4),
                    (1, 5),
                    (1, 6),
                    (2, 2),
                    (2, 3),
                    (2, 4),
                    (2, 5),
                    (2, 6),
                    (3, 3),
                    (4, 4),
                ]
            };
            for (i, j) in pairs {
                let v = derive_memo(kind, i, j, &mut memo)?;
                entries.push(entry(&format!("W{i}{j}"), &wij_mask(n, i, j), v));
            }
            if kind == RepKind::Pair23 {
                add_quartic_specials(kind, &mut entries, &memo, sizes)?;
            }
        }
    }
    Ok(CountTable { rep: kind, entries })
}

fn add_quartic_specials(
    kind: RepKind,
    entries: &mut Vec<CountEntry>,
    memo: &HashMap<(usize, usize), Vec<QPolynomial>>,
    sizes: Vec<QPolynomial>,
) -> Result<()> {
    use OrbitLabel::*;
    let w = |i, j| memo[&(i, j)].clone();
    let q = QPolynomial::q();
    let q1 = QPolynomial::linear(-1);

    let w1 = sparse(kind, &[(Zero, "1"), (D1Sq, "q-1"), (D11, "q(q^2-1)")]);
    let w2 = sparse(
        kind,
        &[(Zero, "1"), (D1Sq, "q^2-1"), (D11, "q(q^2-1)"), (Cs, "(q^2-1)(q^2-q)")],
    );
    // W3 = W×_3 + (q+1)W2 − qW11 and W5 = W×_5 + (q+1)W4 − qW00
    let w3 = add(
        &sparse(kind, &[(Cns, "q^2(q^2-1)(q^2-q)")]),
        &sub(&mul(&q1, &w2), &mul(&q, &w(1, 1))),
    );
    let w4 = sparse(
        kind,
        &[(Zero, "1"), (D1Sq, "2(q-1)"), (D11, "(q-1)^2/2"), (D2, "(q-1)^2/2")],
    );
    let w5 = add(
        &sparse(kind, &[(Ts, "(q^2-1)(q^2-q)")]),
        &sub(&mul(&q1, &w4), &mul(&q, &w(0, 0))),
    );
    let w7 = dense(&[
        "1",
        "q^2+q-2",
        "3/2(q^3-q)",
        "1/2q(q-1)^2",
        "0",
        "(q-1)(q^2-1)",
        "(q^2-q)(q^2-1)",
        "(q^2-q)(q^2-1)",
        "0",
        "0",
        "0",
        "1/2(q^3-q)(2q^2-q-1)",
        "1/2q(q-1)^3",
        "3/2(q^3-q)(q-1)^2",
        "1/2(q^3-q)(q-1)^2",
        "1/2(q^3-q)(q-1)^3",
        "0",
        "1/2(q^3-q)(q-1)^3",
        "0",
        "0",
    ]);
    entries.push(entry("W55", "0*****|0*****", zero_formula_counts(kind, 1)?));
    entries.push(entry("W66", "******|******", sizes));
    entries.push(entry("W1", "000000|00*0**", w1));
    entries.push(entry("W2", "00000*|00*0**", w2));
    entries.push(entry("W3", "00*0**|00*0**", w3));
    entries.push(entry("W4", "000000|000*0*", w4));
    entries.push(entry("W5", "000*0*|000*0*", w5));
    // common zeros at [0:1:0] and [0:0:1]
    entries.push(entry("W6", "***0*0|***0*0", zero_formula_counts(kind, 2)?));
    entries.push(entry("W7", "000***|***000", w7));
    Ok(())
}

/// Entries that seed the recursion: single-form rows, `W_[0,j]` and `W_[1,1]`.
pub fn base_counts(kind: RepKind) -> CountTable {
    let t = count_table(kind);
    let keep = |id: &str| match kind {
        RepKind::Pair22 | RepKind::Pair23 => id.starts_with("W0") || id == "W11",
        _ => true,
    };
    CountTable {
        rep: kind,
        entries: t.entries.iter().filter(|e| keep(&e.id)).cloned().collect(),
    }
}

/// The transcribed special subspaces `W1 … W7` of pairs of ternary forms.
pub fn special_counts(id: &str) -> Result<&'static [QPolynomial]> {
    if !matches!(id, "W1" | "W2" | "W3" | "W4" | "W5" | "W6" | "W7") {
        return Err(Error::UnknownSubspace(id.to_string()));
    }
    let e = count_table(RepKind::Pair23).entry(id)?;
    Ok(&e.classes[0].1)
}

/// Closed-form count table of a representation (built once).
pub fn count_table(kind: RepKind) -> &'static CountTable {
    static TABLES: OnceLock<Vec<CountTable>> = OnceLock::new();
    let all = TABLES.get_or_init(|| {
        RepKind::ALL
            .iter()
            .map(|&k| build_table(k).expect("built-in count tables are consistent"))
            .collect()
    });
    &all[kind as usize]
}

/// Where a family member's counts come from by default.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountSource {
    Formula,
    /// Auxiliary complements are cheap to enumerate and have no table row.
    Enumeration,
}

/// One member of a spanning family.
#[derive(Clone, Debug, Serialize)]
pub struct FamilyMember {
    pub id: String,
    /// Id whose counts equal those of the orthogonal complement.
    pub dual: String,
    pub dim: usize,
    pub source: CountSource,
}

/// `r` subspaces whose count vectors span `R^r`, closed under duals up to
/// the auxiliary entries.
#[derive(Clone, Debug, Serialize)]
pub struct SpanningFamily {
    pub rep: RepKind,
    pub members: Vec<FamilyMember>,
}

impl SpanningFamily {
    pub fn member(&self, id: &str) -> Result<&FamilyMember> {
        self.members
            .iter()
            .find(|m| m.id == id)
            .ok_or_else(|| Error::UnknownSubspace(id.to_string()))
    }

    pub fn self_dual(&self) -> impl Iterator<Item = &FamilyMember> {
        self.members.iter().filter(|m| m.id == m.dual)
    }
}

pub fn spanning_family(kind: RepKind) -> SpanningFamily {
    let pairs: &[(&str, &str)] = match kind {
        RepKind::Sym32 => &[
            ("W0", "V"),
            ("W1", "W1perp"),
            ("W2", "W2"),
            ("W3", "W3perp"),
            ("W1perp", "W1"),
            ("V", "W0"),
        ],
        RepKind::Sym22 => &[("W0", "V"), ("W1", "W2"), ("W2", "W1"), ("V", "W0")],
        RepKind::Sym23 => &[
            ("W0", "V"),
            ("W1", "W1perp"),
            ("W2", "W2perp"),
            ("W1perp", "W1"),
            ("V", "W0"),
        ],
        RepKind::Pair22 => &[
            ("W00", "W33"),
            ("W33", "W00"),
            ("W11", "W22"),
            ("W22", "W11"),
            ("W02", "W13"),
            ("W13", "W02"),
            ("W03", "W03"),
        ],
        RepKind::Pair23 => &[
            ("W00", "W66"),
            ("W66", "W00"),
            ("W11", "W55"),
            ("W55", "W11"),
            ("W04", "W26"),
            ("W26", "W04"),
            ("W05", "W16"),
            ("W16", "W05"),
            ("W14", "W25"),
            ("W25", "W14"),
            ("W22", "W44"),
            ("W44", "W22"),
            ("W33", "W3"),
            ("W3", "W33"),
            ("W5", "W6"),
            ("W6", "W5"),
            ("W06", "W06"),
            ("W15", "W15"),
            ("W24", "W24"),
            ("W7", "W7"),
        ],
    };
    let table = count_table(kind);
    SpanningFamily {
        rep: kind,
        members: pairs
            .iter()
            .map(|&(id, dual)| FamilyMember {
                id: id.to_string(),
                dual: dual.to_string(),
                dim: table.entry(id).expect("family ids are in the table").dim,
                source: CountSource::Formula,
            })
            .collect(),
    }
}

/// Per-subspace totals `Σ_i count_i = q^dim`, as a polynomial identity.
pub fn check_totals(table: &CountTable) -> Result<()> {
    for e in &table.entries {
        for (class, v) in &e.classes {
            let total = v.iter().fold(QPolynomial::zero(), |acc, x| &acc + x);
            if total != QPolynomial::q().pow(e.dim as u32) {
                return Err(Error::Inconsistent(format!(
                    "{} {} (class {:?}) sums to {total}, not q^{}",
                    table.rep, e.id, class, e.dim
                )));
            }
        }
    }
    Ok(())
}

/// Count values at `q` keyed by subspace id.
pub fn evaluate_all(kind: RepKind, q: u64) -> Result<BTreeMap<String, Vec<BigRational>>> {
    let t = count_table(kind);
    let mut out = BTreeMap::new();
    for e in &t.entries {
        if e.counts_for_class(kind.class_of(q)).is_some() {
            out.insert(e.id.clone(), t.evaluate(&e.id, q)?);
        }
    }
    Ok(out)
}

/// Whether every count is a nonnegative integer at `q`.
pub fn integral_at(kind: RepKind, q: u64) -> Result<bool> {
    Ok(evaluate_all(kind, q)?
        .values()
        .flatten()
        .all(|v| v.is_integer() && *v >= BigRational::zero()))
}
