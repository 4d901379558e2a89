//! Slow, independent reference implementations used as test oracles. Nothing
//! here calls into the library's algorithms.

#![allow(dead_code)]

use vgroups_core::{GeneratorId, Presentation};

/// A letter as `(generator index, inverted)`.
pub type RawLetter = (usize, bool);

/// Free reduction by repeatedly deleting the leftmost cancelling pair.
pub fn naive_reduce(mut w: Vec<RawLetter>) -> Vec<RawLetter> {
    loop {
        let hit = w
            .windows(2)
            .position(|p| p[0].0 == p[1].0 && p[0].1 != p[1].1);
        match hit {
            Some(i) => {
                w.drain(i..i + 2);
            }
            None => return w,
        }
    }
}

/// All permutations of `0..k` in lexicographic order.
pub fn all_permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for v in 0..used.len() {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

/// Closure of a set of permutations under composition.
pub fn generated(gens: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let k = gens[0].len();
    let mut out: Vec<Vec<usize>> = vec![(0..k).collect()];
    let mut grew = true;
    while grew {
        grew = false;
        for i in 0..out.len() {
            for g in gens {
                let p = compose(&out[i], g);
                if !out.contains(&p) {
                    out.push(p);
                    grew = true;
                }
            }
        }
    }
    out
}

pub fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    p.iter().map(|&i| q[i]).collect()
}

pub fn invert(p: &[usize]) -> Vec<usize> {
    let mut out = vec![0; p.len()];
    for (i, &v) in p.iter().enumerate() {
        out[v] = i;
    }
    out
}

pub fn raw_relators(p: &Presentation) -> (usize, Vec<Vec<RawLetter>>) {
    let gens: Vec<GeneratorId> = p.generators().to_vec();
    let rels = p
        .relators()
        .iter()
        .map(|r| {
            r.letters()
                .iter()
                .map(|l| (gens.iter().position(|&g| g == l.gen).unwrap(), l.inverse))
                .collect()
        })
        .collect();
    (gens.len(), rels)
}

/// Counts tuples of group elements killing every relator by full enumeration.
pub fn brute_force_homs(gens: usize, relators: &[Vec<RawLetter>], group: &[Vec<usize>]) -> u128 {
    let m = group.len();
    let degree = group[0].len();
    let identity: Vec<usize> = (0..degree).collect();
    let inverses: Vec<Vec<usize>> = group.iter().map(|g| invert(g)).collect();
    let mut digits = vec![0usize; gens];
    let mut count = 0u128;
    loop {
        let ok = relators.iter().all(|r| {
            let mut acc = identity.clone();
            for &(g, inv) in r {
                let e = if inv {
                    &inverses[digits[g]]
                } else {
                    &group[digits[g]]
                };
                acc = compose(&acc, e);
            }
            acc == identity
        });
        if ok {
            count += 1;
        }
        let mut k = 0;
        loop {
            if k == gens {
                return count;
            }
            digits[k] += 1;
            if digits[k] < m {
                break;
            }
            digits[k] = 0;
            k += 1;
        }
    }
}

pub fn sym(k: usize) -> Vec<Vec<usize>> {
    all_permutations(k)
}

pub fn alt4() -> Vec<Vec<usize>> {
    generated(&[vec![1, 2, 0, 3], vec![0, 2, 3, 1]])
}

pub fn dihedral4() -> Vec<Vec<usize>> {
    generated(&[vec![1, 2, 3, 0], vec![3, 2, 1, 0]])
}

pub fn cyclic(k: usize) -> Vec<Vec<usize>> {
    generated(&[(0..k).map(|i| (i + 1) % k).collect()])
}

fn gcd(a: i128, b: i128) -> i128 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_det(m: &[Vec<i128>]) -> i128 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<i128>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, &v)| v)
                        .collect()
                })
                .collect();
            let sign = if j % 2 == 0 { 1 } else { -1 };
            sign * m[0][j] * cofactor_det(&minor)
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from determinantal divisors: `d_k = D_k / D_{k-1}`
/// where `D_k` is the gcd of all `k x k` minors. Zero factors are included.
pub fn invariant_factors(m: &[Vec<i128>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut out = Vec::new();
    let mut prev = 1i128;
    for k in 1..=rows.min(cols) {
        let mut dk = 0i128;
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<i128>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| m[r][c]).collect())
                    .collect();
                dk = gcd(dk, cofactor_det(&minor));
            }
        }
        if dk == 0 {
            out.extend(std::iter::repeat_n(0, rows.min(cols) - out.len()));
            break;
        }
        out.push(dk / prev);
        prev = dk;
    }
    out
}
