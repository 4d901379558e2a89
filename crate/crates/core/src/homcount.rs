//! Exact homomorphism counts from finitely presented groups into small finite
//! groups, and the fingerprints built from them.

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::GeneratorId;
use crate::present::{
    abelian_invariants, tietze_simplify, AbelianInvariants, Presentation, DEFAULT_BUDGET,
};

/// Default cap on the number of generator assignments tried by [`count_homs`].
pub const DEFAULT_CAP: u64 = 100_000_000;

/// Largest order for which associativity is checked on every triple.
const EXHAUSTIVE_ASSOCIATIVITY: usize = 64;

/// A finite group given by its multiplication table. Element 0 is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    name: String,
    order: usize,
    table: Vec<u32>,
    inverse: Vec<u32>,
    /// `(representative, class size)` for each conjugacy class.
    classes: Vec<(usize, usize)>,
}

impl FiniteGroupTable {
    /// Builds a group from `rows[a][b] = a·b`, verifying the group axioms.
    pub fn from_rows(name: impl Into<String>, rows: &[Vec<usize>]) -> Result<Self> {
        let name = name.into();
        let bad = |msg: String| Error::InvalidGroupTable(format!("{name}: {msg}"));
        let m = rows.len();
        if m == 0 {
            return Err(bad("empty table".into()));
        }
        if m > u32::MAX as usize {
            return Err(bad("order too large".into()));
        }
        let mut table = Vec::with_capacity(m * m);
        for (a, row) in rows.iter().enumerate() {
            if row.len() != m {
                return Err(bad(format!(
                    "row {a} has {} entries, expected {m}",
                    row.len()
                )));
            }
            for &c in row {
                if c >= m {
                    return Err(bad(format!("entry {c} out of range in row {a}")));
                }
                table.push(c as u32);
            }
        }
        let mul = |a: usize, b: usize| table[a * m + b] as usize;
        for a in 0..m {
            if mul(0, a) != a || mul(a, 0) != a {
                return Err(bad(format!("element 0 is not an identity for {a}")));
            }
        }
        let inverse = (0..m)
            .map(|a| {
                let inv = (0..m)
                    .find(|&b| mul(a, b) == 0)
                    .ok_or_else(|| bad(format!("element {a} has no right inverse")))?;
                if mul(inv, a) != 0 {
                    return Err(bad(format!("inverse of {a} is one-sided")));
                }
                Ok(inv as u32)
            })
            .collect::<Result<Vec<_>>>()?;
        // beyond the exhaustive bound, test against a spread of right factors
        let stride = m.div_ceil(EXHAUSTIVE_ASSOCIATIVITY).max(1);
        for a in 0..m {
            for b in 0..m {
                let ab = mul(a, b);
                for c in (0..m).step_by(stride) {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(bad(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let mut g = FiniteGroupTable {
            name,
            order: m,
            table,
            inverse,
            classes: Vec::new(),
        };
        g.classes = g.compute_classes();
        Ok(g)
    }

    /// The permutation group generated by `gens` (images of `0..degree`).
    /// Elements are numbered in breadth-first order from the identity.
    pub fn from_permutations(
        name: impl Into<String>,
        degree: usize,
        gens: &[Vec<usize>],
    ) -> Result<Self> {
        let identity: Vec<usize> = (0..degree).collect();
        let mut elements = vec![identity.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(identity, 0)]);
        let mut next = 0;
        while next < elements.len() {
            for g in gens {
                // (p·g)(k) = g(p(k)): apply p first
                let prod: Vec<usize> = elements[next].iter().map(|&k| g[k]).collect();
                if !index.contains_key(&prod) {
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            next += 1;
        }
        let rows: Vec<Vec<usize>> = elements
            .iter()
            .map(|p| {
                elements
                    .iter()
                    .map(|q| index[&p.iter().map(|&k| q[k]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        FiniteGroupTable::from_rows(name, &rows)
    }

    pub fn cyclic(k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::UnknownGroup("c0".into()));
        }
        let rows: Vec<Vec<usize>> = (0..k)
            .map(|a| (0..k).map(|b| (a + b) % k).collect())
            .collect();
        FiniteGroupTable::from_rows(format!("c{k}"), &rows)
    }

    pub fn sym3() -> Self {
        Self::from_permutations("sym3", 3, &[vec![1, 0, 2], vec![1, 2, 0]]).expect("valid")
    }

    pub fn sym4() -> Self {
        Self::from_permutations("sym4", 4, &[vec![1, 0, 2, 3], vec![1, 2, 3, 0]]).expect("valid")
    }

    pub fn alt4() -> Self {
        Self::from_permutations("alt4", 4, &[vec![1, 2, 0, 3], vec![0, 2, 3, 1]]).expect("valid")
    }

    pub fn dihedral4() -> Self {
        Self::from_permutations("dihedral4", 4, &[vec![1, 2, 3, 0], vec![2, 1, 0, 3]])
            .expect("valid")
    }

    /// Parses `sym3`, `sym4`, `alt4`, `d4`/`dihedral4` or `c<k>`.
    pub fn builtin(name: &str) -> Result<Self> {
        match name {
            "sym3" | "s3" => Ok(Self::sym3()),
            "sym4" | "s4" => Ok(Self::sym4()),
            "alt4" | "a4" => Ok(Self::alt4()),
            "d4" | "dihedral4" => Ok(Self::dihedral4()),
            _ => match name.strip_prefix('c').map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Self::cyclic(k),
                _ => Err(Error::UnknownGroup(name.to_string())),
            },
        }
    }

    /// Reads `order m` followed by `m` rows of `m` element ids.
    pub fn parse_table(name: impl Into<String>, text: &str) -> Result<Self> {
        let name = name.into();
        let bad = |msg: &str| Error::InvalidGroupTable(format!("{name}: {msg}"));
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines.next().ok_or_else(|| bad("missing `order m` line"))?;
        let m: usize = header
            .strip_prefix("order")
            .and_then(|rest| rest.trim().parse().ok())
            .ok_or_else(|| bad("first line must be `order m`"))?;
        let rows = lines
            .map(|l| {
                l.split_whitespace()
                    .map(|t| {
                        t.parse::<usize>()
                            .map_err(|_| bad(&format!("bad entry `{t}`")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != m {
            return Err(bad(&format!("expected {m} rows, found {}", rows.len())));
        }
        FiniteGroupTable::from_rows(name, &rows)
    }

    pub fn direct_product(g: &Self, h: &Self) -> Result<Self> {
        let (m, k) = (g.order, h.order);
        let rows: Vec<Vec<usize>> = (0..m * k)
            .map(|a| {
                (0..m * k)
                    .map(|b| g.mul(a / k, b / k) * k + h.mul(a % k, b % k))
                    .collect()
            })
            .collect();
        FiniteGroupTable::from_rows(format!("{}x{}", g.name, h.name), &rows)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a] as usize
    }

    fn compute_classes(&self) -> Vec<(usize, usize)> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order {
            if seen[a] {
                continue;
            }
            let mut size = 0;
            for g in 0..self.order {
                let c = self.mul(self.mul(g, a), self.inv(g));
                if !seen[c] {
                    seen[c] = true;
                    size += 1;
                }
            }
            classes.push((a, size));
        }
        classes
    }

    pub fn conjugacy_classes(&self) -> &[(usize, usize)] {
        &self.classes
    }

    pub fn conjugacy_class_count(&self) -> usize {
        self.classes.len()
    }
}

/// The battery used by [`fingerprint`] unless overridden.
pub fn default_battery() -> Vec<FiniteGroupTable> {
    vec![
        FiniteGroupTable::sym3(),
        FiniteGroupTable::dihedral4(),
        FiniteGroupTable::alt4(),
        FiniteGroupTable::sym4(),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HomCountOptions {
    pub cap: u64,
    /// Split the search over the images of the first generator.
    pub parallel: bool,
}

impl Default for HomCountOptions {
    fn default() -> Self {
        HomCountOptions {
            cap: DEFAULT_CAP,
            parallel: false,
        }
    }
}

/// Relators rewritten over search positions, bucketed by the position at
/// which all of their letters become assigned.
struct SearchPlan {
    depth: usize,
    free: usize,
    /// `checks[d]`: relators to test once positions `0..=d` are assigned.
    checks: Vec<Vec<Vec<(usize, bool)>>>,
}

fn plan(p: &Presentation) -> SearchPlan {
    let gens = p.generators();
    let occurrence = |g: GeneratorId| p.relators().iter().map(|r| r.occurrences(g)).sum::<usize>();
    let mut order: Vec<(usize, usize)> = gens
        .iter()
        .enumerate()
        .map(|(i, &g)| (i, occurrence(g)))
        .filter(|&(_, occ)| occ > 0)
        .collect();
    order.sort_by_key(|&(i, occ)| (std::cmp::Reverse(occ), i));
    let mut position = HashMap::new();
    for (pos, &(i, _)) in order.iter().enumerate() {
        position.insert(gens[i], pos);
    }
    let depth = order.len();
    let mut checks = vec![Vec::new(); depth];
    for r in p.relators() {
        let letters: Vec<(usize, bool)> = r
            .letters()
            .iter()
            .map(|l| (position[&l.gen], l.inverse))
            .collect();
        let ready = letters
            .iter()
            .map(|&(pos, _)| pos)
            .max()
            .expect("relators are nonempty");
        checks[ready].push(letters);
    }
    SearchPlan {
        depth,
        free: gens.len() - depth,
        checks,
    }
}

fn satisfied(g: &FiniteGroupTable, relator: &[(usize, bool)], assignment: &[usize]) -> bool {
    relator.iter().fold(0, |acc, &(pos, inv)| {
        let v = assignment[pos];
        g.mul(acc, if inv { g.inv(v) } else { v })
    }) == 0
}

fn search(g: &FiniteGroupTable, plan: &SearchPlan, assignment: &mut Vec<usize>) -> u128 {
    let d = assignment.len();
    if d == plan.depth {
        return 1;
    }
    let mut total = 0;
    for v in 0..g.order() {
        assignment.push(v);
        if plan.checks[d].iter().all(|r| satisfied(g, r, assignment)) {
            total += search(g, plan, assignment);
        }
        assignment.pop();
    }
    total
}

/// Number of homomorphisms `p -> g`.
///
/// Conjugating a homomorphism by an element of `g` gives another one, so the
/// first generator only ranges over conjugacy class representatives, weighted
/// by class size. The cap bounds the resulting search space,
/// `#classes · |g|^(k-1)`, where `k` counts the generators occurring in some
/// relator; the others contribute a factor `|g|` each without enumeration.
pub fn count_homs(p: &Presentation, g: &FiniteGroupTable, opts: HomCountOptions) -> Result<u128> {
    let plan = plan(p);
    let m = g.order() as u128;
    let evaluations = match plan.depth {
        0 => 1,
        d => u32::try_from(d - 1)
            .ok()
            .and_then(|e| m.checked_pow(e))
            .and_then(|t| t.checked_mul(g.classes.len() as u128))
            .unwrap_or(u128::MAX),
    };
    if evaluations > u128::from(opts.cap) {
        return Err(Error::CapExceeded {
            evaluations,
            cap: opts.cap,
        });
    }
    let free_factor = u32::try_from(plan.free)
        .ok()
        .and_then(|f| m.checked_pow(f))
        .ok_or(Error::Overflow)?;
    let from_class = |&(rep, size): &(usize, usize)| {
        let mut assignment = Vec::with_capacity(plan.depth);
        assignment.push(rep);
        if plan.checks[0].iter().all(|r| satisfied(g, r, &assignment)) {
            search(g, &plan, &mut assignment) * size as u128
        } else {
            0
        }
    };
    let constrained: u128 = if plan.depth == 0 {
        1
    } else if opts.parallel {
        g.classes.par_iter().map(from_class).sum()
    } else {
        g.classes.iter().map(from_class).sum()
    };
    constrained.checked_mul(free_factor).ok_or(Error::Overflow)
}

/// Abelian invariants plus hom counts into a battery of finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub abelian: AbelianInvariants,
    pub counts: Vec<(String, u128)>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.abelian)?;
        for (name, count) in &self.counts {
            write!(f, " {name}={count}")?;
        }
        Ok(())
    }
}

/// Counts are taken on the Tietze-simplified presentation, which presents the
/// same group with fewer generators.
pub fn fingerprint(
    p: &Presentation,
    battery: &[FiniteGroupTable],
    opts: HomCountOptions,
) -> Result<Fingerprint> {
    let abelian = abelian_invariants(p)?;
    let simple = tietze_simplify(p, DEFAULT_BUDGET)?.presentation;
    let counts = battery
        .iter()
        .map(|g| Ok((g.name().to_string(), count_homs(&simple, g, opts)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Fingerprint { abelian, counts })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pres(text: &str) -> Presentation {
        text.parse().unwrap()
    }

    fn count(text: &str, g: &FiniteGroupTable) -> u128 {
        count_homs(&pres(text), g, HomCountOptions::default()).unwrap()
    }

    #[test]
    fn builtin_orders() {
        let orders: Vec<usize> = ["sym3", "d4", "alt4", "sym4", "c1", "c7"]
            .iter()
            .map(|n| FiniteGroupTable::builtin(n).unwrap().order())
            .collect();
        assert_eq!(orders, [6, 8, 12, 24, 1, 7]);
        assert_eq!(FiniteGroupTable::sym3().conjugacy_class_count(), 3);
        assert_eq!(FiniteGroupTable::dihedral4().conjugacy_class_count(), 5);
        assert_eq!(FiniteGroupTable::alt4().conjugacy_class_count(), 4);
        assert_eq!(FiniteGroupTable::sym4().conjugacy_class_count(), 5);
        let sizes: Vec<usize> = FiniteGroupTable::sym3()
            .conjugacy_classes()
            .iter()
            .map(|c| c.1)
            .collect();
        assert_eq!(sizes, [1, 3, 2]);
        assert!(FiniteGroupTable::builtin("q8").is_err());
        assert!(FiniteGroupTable::builtin("c0").is_err());
    }

    #[test]
    fn table_file_round_trip() {
        let g = FiniteGroupTable::parse_table("z3", "order 3\n0 1 2\n1 2 0\n2 0 1\n").unwrap();
        assert_eq!(g.order(), 3);
        assert_eq!(g.inv(1), 2);
        assert!(FiniteGroupTable::parse_table("x", "order 2\n0 1\n1 1\n").is_err());
        assert!(FiniteGroupTable::parse_table("x", "order 2\n0 1\n").is_err());
        assert!(FiniteGroupTable::parse_table("x", "0 1\n1 0\n").is_err());
        // a latin square with identity 0 that is not associative
        let loop5 = "order 5\n0 1 2 3 4\n1 0 3 4 2\n2 4 0 1 3\n3 2 4 0 1\n4 3 1 2 0\n";
        assert!(FiniteGroupTable::parse_table("loop", loop5).is_err());
    }

    #[test]
    fn counts_on_small_presentations() {
        let s3 = FiniteGroupTable::sym3();
        assert_eq!(count("gens: x1 y\n", &s3), 36);
        assert_eq!(count("gens: x1 x2\nrel: x1 x2 x1^-1 x2^-1\n", &s3), 18);
        assert_eq!(count("gens: x1\nrel: x1\n", &s3), 1);
        assert_eq!(count("gens: x1\nrel: x1\n", &FiniteGroupTable::sym4()), 1);
        assert_eq!(count("gens: x1\nrel: x1 x1\n", &s3), 4);
        assert_eq!(count("gens:\n", &s3), 1);
    }

    #[test]
    fn cap_is_enforced() {
        let p = pres("gens: x1 x2 x3\nrel: x1 x2 x3\n");
        let err = count_homs(
            &p,
            &FiniteGroupTable::sym3(),
            HomCountOptions {
                cap: 100,
                parallel: false,
            },
        );
        // three classes times 6^2 for the remaining generators
        assert_eq!(
            err.unwrap_err(),
            Error::CapExceeded {
                evaluations: 108,
                cap: 100
            }
        );
        // free generators are not enumerated
        let p = pres("gens: x1 x2 x3 x4 x5 x6\nrel: x1 x1\n");
        let n = count_homs(
            &p,
            &FiniteGroupTable::sym3(),
            HomCountOptions {
                cap: 100,
                parallel: false,
            },
        );
        assert_eq!(n.unwrap(), 4 * 6u128.pow(5));
    }

    #[test]
    fn parallel_matches_sequential() {
        let p = pres("gens: x1 x2 y\nrel: x1 x2 x1 x2^-1 x1^-1 x2^-1\nrel: y x1 y^-1 x2^-1\n");
        let g = FiniteGroupTable::sym4();
        let seq = count_homs(&p, &g, HomCountOptions::default()).unwrap();
        let par = count_homs(
            &p,
            &g,
            HomCountOptions {
                parallel: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn product_rule() {
        let c6 = FiniteGroupTable::cyclic(6).unwrap();
        let c2c3 = FiniteGroupTable::direct_product(
            &FiniteGroupTable::cyclic(2).unwrap(),
            &FiniteGroupTable::cyclic(3).unwrap(),
        )
        .unwrap();
        assert_eq!(c2c3.order(), 6);
        for text in [
            "gens: x1\nrel: x1 x1 x1\n",
            "gens: x1 x2\nrel: x1 x2 x1 x2\n",
        ] {
            assert_eq!(count(text, &c6), count(text, &c2c3));
        }
    }

    #[test]
    fn fingerprints_separate_free_groups_of_different_rank() {
        let battery = [FiniteGroupTable::sym3()];
        let f2 = fingerprint(&pres("gens: x1 y\n"), &battery, HomCountOptions::default()).unwrap();
        let f3 = fingerprint(
            &pres("gens: x1 x2 y\n"),
            &battery,
            HomCountOptions::default(),
        )
        .unwrap();
        assert_eq!(f2.counts, [("sym3".to_string(), 36)]);
        assert_eq!(f3.counts, [("sym3".to_string(), 216)]);
        assert_eq!(f2.to_string(), "Z^2 sym3=36");
    }
}
