//! Braid words over the classical, virtual and welded alphabets, their
//! defining relations, and the moves relating braids with equivalent closures.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theory {
    Classical,
    Virtual,
    Welded,
}

impl Theory {
    pub fn allows(self, family: Family) -> bool {
        matches!(
            (self, family),
            (_, Family::Sigma(_))
                | (Theory::Virtual, Family::Rho)
                | (Theory::Welded, Family::Alpha)
        )
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Theory::Classical => "classical",
            Theory::Virtual => "virtual",
            Theory::Welded => "welded",
        })
    }
}

impl FromStr for Theory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Theory::Classical),
            "virtual" => Ok(Theory::Virtual),
            "welded" => Ok(Theory::Welded),
            _ => Err(Error::parse(s, "expected classical, virtual or welded")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Pos,
    Neg,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Pos => Sign::Neg,
            Sign::Neg => Sign::Pos,
        }
    }
}

/// Letter families: `σ_i^{±1}`, the virtual crossing `ρ_i`, the welded
/// crossing `α_i`. `ρ_i` and `α_i` are involutions and carry no sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Sigma(Sign),
    Rho,
    Alpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BraidLetter {
    pub family: Family,
    /// 1-based; the letter acts on strands `position` and `position + 1`.
    pub position: usize,
}

impl BraidLetter {
    pub fn sigma(i: usize) -> Self {
        BraidLetter {
            family: Family::Sigma(Sign::Pos),
            position: i,
        }
    }

    pub fn sigma_inv(i: usize) -> Self {
        BraidLetter {
            family: Family::Sigma(Sign::Neg),
            position: i,
        }
    }

    pub fn rho(i: usize) -> Self {
        BraidLetter {
            family: Family::Rho,
            position: i,
        }
    }

    pub fn alpha(i: usize) -> Self {
        BraidLetter {
            family: Family::Alpha,
            position: i,
        }
    }

    pub fn inverse(self) -> Self {
        match self.family {
            Family::Sigma(s) => BraidLetter {
                family: Family::Sigma(s.flip()),
                position: self.position,
            },
            Family::Rho | Family::Alpha => self,
        }
    }

    pub fn cancels(self, other: BraidLetter) -> bool {
        self.inverse() == other
    }

    fn shifted(self, by: usize) -> Self {
        BraidLetter {
            position: self.position + by,
            ..self
        }
    }
}

impl fmt::Display for BraidLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Sigma(Sign::Pos) => write!(f, "s{}", self.position),
            Family::Sigma(Sign::Neg) => write!(f, "s{}^-1", self.position),
            Family::Rho => write!(f, "r{}", self.position),
            Family::Alpha => write!(f, "a{}", self.position),
        }
    }
}

impl FromStr for BraidLetter {
    type Err = Error;

    fn from_str(token: &str) -> Result<Self> {
        let (body, inverted) = match token.strip_suffix("^-1") {
            Some(body) => (body, true),
            None => (token, false),
        };
        let mut chars = body.chars();
        let head = chars.next();
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(
                token,
                "expected s<k>, r<k> or a<k> with optional ^-1",
            ));
        }
        let position: usize = digits
            .parse()
            .map_err(|_| Error::parse(token, "position does not fit"))?;
        let family = match (head, inverted) {
            (Some('s'), false) => Family::Sigma(Sign::Pos),
            (Some('s'), true) => Family::Sigma(Sign::Neg),
            (Some('r'), _) => Family::Rho,
            (Some('a'), _) => Family::Alpha,
            _ => return Err(Error::parse(token, "unknown letter family")),
        };
        Ok(BraidLetter { family, position })
    }
}

/// A normalized braid word on `strands` strands.
///
/// Normalization only cancels adjacent inverse pairs (`σσ⁻¹`, `ρρ`, `αα`);
/// the braid relations are never applied implicitly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    theory: Theory,
    letters: Vec<BraidLetter>,
}

fn check_letter(l: BraidLetter, strands: usize, theory: Theory) -> Result<()> {
    if l.position < 1 || l.position >= strands {
        return Err(Error::PositionOutOfRange {
            position: l.position,
            strands,
        });
    }
    if !theory.allows(l.family) {
        return Err(Error::IllegalLetter {
            letter: l.to_string(),
            theory: theory.to_string(),
        });
    }
    Ok(())
}

fn normalize(letters: impl IntoIterator<Item = BraidLetter>) -> Vec<BraidLetter> {
    let mut out: Vec<BraidLetter> = Vec::new();
    for l in letters {
        if out.last().is_some_and(|top| top.cancels(l)) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

impl BraidWord {
    pub fn new(
        strands: usize,
        theory: Theory,
        letters: impl IntoIterator<Item = BraidLetter>,
    ) -> Result<Self> {
        if strands == 0 {
            return Err(Error::PositionOutOfRange {
                position: 0,
                strands,
            });
        }
        let letters: Vec<_> = letters.into_iter().collect();
        for &l in &letters {
            check_letter(l, strands, theory)?;
        }
        Ok(BraidWord {
            strands,
            theory,
            letters: normalize(letters),
        })
    }

    pub fn empty(strands: usize, theory: Theory) -> Self {
        BraidWord {
            strands: strands.max(1),
            theory,
            letters: Vec::new(),
        }
    }

    /// Parses `"1"` or space-separated tokens `s<k>`, `s<k>^-1`, `r<k>`,
    /// `a<k>` (signed `r`/`a` tokens are accepted and normalized).
    pub fn parse(text: &str, strands: usize, theory: Theory) -> Result<Self> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return BraidWord::new(strands, theory, []);
        }
        let letters = text
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<BraidLetter>>>()?;
        BraidWord::new(strands, theory, letters)
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn theory(&self) -> Theory {
        self.theory
    }

    pub fn letters(&self) -> &[BraidLetter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Reinterprets the word in another theory; fails if some letter is not
    /// in the target alphabet.
    pub fn with_theory(&self, theory: Theory) -> Result<Self> {
        BraidWord::new(self.strands, theory, self.letters.iter().copied())
    }

    /// The same word viewed on more strands.
    pub fn embed(&self, strands: usize) -> Result<Self> {
        if strands < self.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: strands,
            });
        }
        Ok(BraidWord {
            strands,
            ..self.clone()
        })
    }

    /// The projection `VB_n -> WB_n` sending `ρ_i` to `α_i`.
    pub fn to_welded(&self) -> Result<Self> {
        if self.theory == Theory::Welded {
            return Ok(self.clone());
        }
        let letters = self.letters.iter().map(|&l| match l.family {
            Family::Rho => BraidLetter::alpha(l.position),
            _ => l,
        });
        BraidWord::new(self.strands, Theory::Welded, letters)
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        if self.strands != other.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: other.strands,
            });
        }
        if self.theory != other.theory {
            return Err(Error::TheoryMismatch {
                expected: self.theory.to_string(),
                found: other.theory.to_string(),
            });
        }
        Ok(BraidWord {
            strands: self.strands,
            theory: self.theory,
            letters: normalize(self.letters.iter().chain(&other.letters).copied()),
        })
    }

    pub fn inverse(&self) -> Self {
        BraidWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
            ..self.clone()
        }
    }

    fn appended(&self, extra: impl IntoIterator<Item = BraidLetter>) -> Result<Self> {
        let letters: Vec<_> = self.letters.iter().copied().chain(extra).collect();
        BraidWord::new(self.strands, self.theory, letters)
    }

    /// The permutation of `{0, ..., n-1}` induced on strand endpoints.
    pub fn underlying_permutation(&self) -> Permutation {
        let mut p = Permutation::identity(self.strands);
        for l in &self.letters {
            p.swap_images(l.position - 1, l.position);
        }
        p
    }

    /// Number of components of the closure.
    pub fn components(&self) -> usize {
        self.underlying_permutation().cycle_count()
    }

    /// `g · self · g⁻¹`
    pub fn conjugate(&self, g: BraidLetter) -> Result<Self> {
        check_letter(g, self.strands, self.theory)?;
        let letters: Vec<_> = std::iter::once(g)
            .chain(self.letters.iter().copied())
            .chain(std::iter::once(g.inverse()))
            .collect();
        BraidWord::new(self.strands, self.theory, letters)
    }

    /// Right stabilization onto `n + 1` strands.
    pub fn stabilize(&self, kind: Stabilization) -> Result<Self> {
        let n = self.strands;
        let letter = match kind {
            Stabilization::Positive => BraidLetter::sigma(n),
            Stabilization::Negative => BraidLetter::sigma_inv(n),
            Stabilization::Virtual => match self.theory {
                Theory::Virtual => BraidLetter::rho(n),
                Theory::Welded => BraidLetter::alpha(n),
                Theory::Classical => {
                    return Err(Error::IllegalLetter {
                        letter: format!("r{n}"),
                        theory: self.theory.to_string(),
                    })
                }
            },
        };
        self.embed(n + 1)?.appended([letter])
    }

    /// The shift map `s: VB_n -> VB_{n+1}`, `s(σ_i) = σ_{i+1}`.
    pub fn shift(&self) -> Self {
        BraidWord {
            strands: self.strands + 1,
            theory: self.theory,
            letters: self.letters.iter().map(|l| l.shifted(1)).collect(),
        }
    }

    /// Replaces the factor at `at` matching one side of `rel` by the other side.
    pub fn rewrite_with_relation(&self, rel: &DefiningRelation, at: usize) -> Result<Self> {
        let no_match = || Error::NoMatch {
            relation: rel.to_string(),
            index: at,
        };
        for l in rel.left.iter().chain(&rel.right) {
            check_letter(*l, self.strands, self.theory)?;
        }
        let matches = |side: &[BraidLetter]| {
            at + side.len() <= self.letters.len() && self.letters[at..at + side.len()] == *side
        };
        let (from, to) = if !rel.left.is_empty() && matches(&rel.left) {
            (&rel.left, &rel.right)
        } else if !rel.right.is_empty() && matches(&rel.right) {
            (&rel.right, &rel.left)
        } else {
            return Err(no_match());
        };
        let letters: Vec<_> = self.letters[..at]
            .iter()
            .chain(to.iter())
            .chain(&self.letters[at + from.len()..])
            .copied()
            .collect();
        BraidWord::new(self.strands, self.theory, letters)
    }

    /// Every `(relation, index)` where a nonempty side of a relation occurs.
    pub fn relation_sites<'a>(
        &self,
        relations: &'a [DefiningRelation],
    ) -> Vec<(&'a DefiningRelation, usize)> {
        let mut out = Vec::new();
        for rel in relations {
            for side in [&rel.left, &rel.right] {
                if side.is_empty() || side.len() > self.letters.len() {
                    continue;
                }
                for at in 0..=self.letters.len() - side.len() {
                    if self.letters[at..at + side.len()] == **side {
                        out.push((rel, at));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        let tokens: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&tokens.join(" "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stabilization {
    Positive,
    Negative,
    /// `ρ_n` in the virtual theory, `α_n` in the welded theory.
    Virtual,
}

impl fmt::Display for Stabilization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stabilization::Positive => "positive",
            Stabilization::Negative => "negative",
            Stabilization::Virtual => "virtual",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExchangeSide {
    Right,
    Left,
}

impl fmt::Display for ExchangeSide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExchangeSide::Right => "right",
            ExchangeSide::Left => "left",
        })
    }
}

/// Both sides of a virtual exchange move built from `b1, b2 ∈ VB_n`.
///
/// Right: `b1 σ_n⁻¹ b2 σ_n` and `b1 ρ_n b2 ρ_n`.
/// Left: `s(b1) σ_1⁻¹ s(b2) σ_1` and `s(b1) ρ_1 s(b2) ρ_1`.
pub fn exchange_pair(
    b1: &BraidWord,
    b2: &BraidWord,
    side: ExchangeSide,
) -> Result<(BraidWord, BraidWord)> {
    for b in [b1, b2] {
        if b.theory != Theory::Virtual {
            return Err(Error::TheoryMismatch {
                expected: Theory::Virtual.to_string(),
                found: b.theory.to_string(),
            });
        }
    }
    if b1.strands != b2.strands {
        return Err(Error::StrandMismatch {
            left: b1.strands,
            right: b2.strands,
        });
    }
    let n = b1.strands;
    let (p1, p2, pos) = match side {
        ExchangeSide::Right => (b1.embed(n + 1)?, b2.embed(n + 1)?, n),
        ExchangeSide::Left => (b1.shift(), b2.shift(), 1),
    };
    let build = |open: BraidLetter, close: BraidLetter| {
        let letters: Vec<_> = p1
            .letters
            .iter()
            .copied()
            .chain([open])
            .chain(p2.letters.iter().copied())
            .chain([close])
            .collect();
        BraidWord::new(n + 1, Theory::Virtual, letters)
    };
    let classical = build(BraidLetter::sigma_inv(pos), BraidLetter::sigma(pos))?;
    let virtual_form = build(BraidLetter::rho(pos), BraidLetter::rho(pos))?;
    Ok((classical, virtual_form))
}

/// A permutation of `{0, ..., n-1}`; `images[k]` is where `k` is sent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return None;
            }
        }
        Some(Permutation { images })
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Post-compose with the transposition `(a b)`.
    fn swap_images(&mut self, a: usize, b: usize) {
        for v in &mut self.images {
            if *v == a {
                *v = b;
            } else if *v == b {
                *v = a;
            }
        }
    }

    /// `self` first, then `next`.
    pub fn then(&self, next: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| next.images[i]).collect(),
        }
    }

    pub fn cycle_count(&self) -> usize {
        let mut seen = vec![false; self.images.len()];
        let mut cycles = 0;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            cycles += 1;
            let mut k = start;
            while !seen[k] {
                seen[k] = true;
                k = self.images[k];
            }
        }
        cycles
    }

    /// True iff the permutation is a single cycle through every point.
    pub fn is_full_cycle(&self) -> bool {
        !self.images.is_empty() && self.cycle_count() == 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelationKind {
    /// `σ_i σ_{i+1} σ_i = σ_{i+1} σ_i σ_{i+1}`
    Braid,
    /// `σ_i σ_j = σ_j σ_i`, `|i - j| >= 2`
    FarCommutation,
    /// braid relation among the `ρ`s (or `α`s)
    PermBraid,
    PermFarCommutation,
    /// `ρ_i² = 1`
    Involution,
    /// `σ_i ρ_j = ρ_j σ_i`, `|i - j| >= 2`
    MixedFarCommutation,
    /// virtual: `ρ_i ρ_{i+1} σ_i = σ_{i+1} ρ_i ρ_{i+1}`;
    /// welded: `α_{i+1} α_i σ_{i+1} = σ_i α_{i+1} α_i`
    Mixed,
    /// `ρ_i σ_{i+1} σ_i = σ_{i+1} σ_i ρ_{i+1}`; a defining relation only in
    /// the welded theory
    F1,
    /// `ρ_{i+1} σ_i σ_{i+1} = σ_i σ_{i+1} ρ_i`
    F2,
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RelationKind::Braid => "braid",
            RelationKind::FarCommutation => "far-commutation",
            RelationKind::PermBraid => "perm-braid",
            RelationKind::PermFarCommutation => "perm-far-commutation",
            RelationKind::Involution => "involution",
            RelationKind::MixedFarCommutation => "mixed-far-commutation",
            RelationKind::Mixed => "mixed",
            RelationKind::F1 => "F1",
            RelationKind::F2 => "F2",
        })
    }
}

/// One instance `left = right` of a relation among braid letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DefiningRelation {
    pub theory: Theory,
    pub kind: RelationKind,
    pub i: usize,
    pub j: Option<usize>,
    pub left: Vec<BraidLetter>,
    pub right: Vec<BraidLetter>,
}

fn side_text(side: &[BraidLetter]) -> String {
    if side.is_empty() {
        return "1".to_string();
    }
    side.iter()
        .map(|l| l.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for DefiningRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.j {
            Some(j) => write!(f, "{}(i={},j={})", self.kind, self.i, j)?,
            None => write!(f, "{}(i={})", self.kind, self.i)?,
        }
        write!(
            f,
            ": {} = {}",
            side_text(&self.left),
            side_text(&self.right)
        )
    }
}

impl DefiningRelation {
    fn new(
        theory: Theory,
        kind: RelationKind,
        i: usize,
        j: Option<usize>,
        left: Vec<BraidLetter>,
        right: Vec<BraidLetter>,
    ) -> Self {
        DefiningRelation {
            theory,
            kind,
            i,
            j,
            left,
            right,
        }
    }
}

/// The defining relations of `B_n`, `VB_n` or `WB_n`.
pub fn defining_relations(theory: Theory, n: usize) -> Vec<DefiningRelation> {
    use BraidLetter as L;
    use RelationKind as K;
    let s = L::sigma;
    let perm = |i| match theory {
        Theory::Welded => L::alpha(i),
        _ => L::rho(i),
    };
    let gens = 1..n;
    let mut out = Vec::new();

    for i in 1..n.saturating_sub(1) {
        out.push(DefiningRelation::new(
            theory,
            K::Braid,
            i,
            None,
            vec![s(i), s(i + 1), s(i)],
            vec![s(i + 1), s(i), s(i + 1)],
        ));
    }
    for i in gens.clone() {
        for j in i + 2..n {
            out.push(DefiningRelation::new(
                theory,
                K::FarCommutation,
                i,
                Some(j),
                vec![s(i), s(j)],
                vec![s(j), s(i)],
            ));
        }
    }
    if theory == Theory::Classical {
        return out;
    }

    for i in 1..n.saturating_sub(1) {
        out.push(DefiningRelation::new(
            theory,
            K::PermBraid,
            i,
            None,
            vec![perm(i), perm(i + 1), perm(i)],
            vec![perm(i + 1), perm(i), perm(i + 1)],
        ));
    }
    for i in gens.clone() {
        for j in i + 2..n {
            out.push(DefiningRelation::new(
                theory,
                K::PermFarCommutation,
                i,
                Some(j),
                vec![perm(i), perm(j)],
                vec![perm(j), perm(i)],
            ));
        }
    }
    for i in gens.clone() {
        out.push(DefiningRelation::new(
            theory,
            K::Involution,
            i,
            None,
            vec![perm(i), perm(i)],
            vec![],
        ));
    }
    for i in gens.clone() {
        for j in gens.clone() {
            if i.abs_diff(j) >= 2 {
                out.push(DefiningRelation::new(
                    theory,
                    K::MixedFarCommutation,
                    i,
                    Some(j),
                    vec![s(i), perm(j)],
                    vec![perm(j), s(i)],
                ));
            }
        }
    }
    for i in 1..n.saturating_sub(1) {
        let (left, right) = match theory {
            Theory::Welded => (
                vec![perm(i + 1), perm(i), s(i + 1)],
                vec![s(i), perm(i + 1), perm(i)],
            ),
            _ => (
                vec![perm(i), perm(i + 1), s(i)],
                vec![s(i + 1), perm(i), perm(i + 1)],
            ),
        };
        out.push(DefiningRelation::new(
            theory,
            K::Mixed,
            i,
            None,
            left,
            right,
        ));
    }
    if theory == Theory::Welded {
        for i in 1..n.saturating_sub(1) {
            out.push(DefiningRelation::new(
                theory,
                K::F1,
                i,
                None,
                vec![perm(i), s(i + 1), s(i)],
                vec![s(i + 1), s(i), perm(i + 1)],
            ));
        }
    }
    out
}

/// The forbidden-move relations F1 and F2 over the virtual alphabet.
pub fn forbidden_relations(n: usize) -> Vec<DefiningRelation> {
    use BraidLetter as L;
    let (s, r) = (L::sigma, L::rho);
    let mut out = Vec::new();
    for i in 1..n.saturating_sub(1) {
        out.push(DefiningRelation::new(
            Theory::Virtual,
            RelationKind::F1,
            i,
            None,
            vec![r(i), s(i + 1), s(i)],
            vec![s(i + 1), s(i), r(i + 1)],
        ));
    }
    for i in 1..n.saturating_sub(1) {
        out.push(DefiningRelation::new(
            Theory::Virtual,
            RelationKind::F2,
            i,
            None,
            vec![r(i + 1), s(i), s(i + 1)],
            vec![s(i), s(i + 1), r(i)],
        ));
    }
    out
}

/// The letters `σ_i^{±1}` and, outside the classical theory, `ρ_i` or `α_i`.
pub fn alphabet(strands: usize, theory: Theory) -> Vec<BraidLetter> {
    let mut out = Vec::new();
    for i in 1..strands {
        out.push(BraidLetter::sigma(i));
        out.push(BraidLetter::sigma_inv(i));
        match theory {
            Theory::Classical => {}
            Theory::Virtual => out.push(BraidLetter::rho(i)),
            Theory::Welded => out.push(BraidLetter::alpha(i)),
        }
    }
    out
}

/// A uniformly random word of exactly `length` letters with no adjacent
/// cancelling pair.
pub fn random_braid_with<R: Rng + ?Sized>(
    rng: &mut R,
    strands: usize,
    length: usize,
    theory: Theory,
) -> BraidWord {
    let alphabet = alphabet(strands, theory);
    let mut letters: Vec<BraidLetter> = Vec::with_capacity(length);
    if alphabet.is_empty() {
        return BraidWord::empty(strands, theory);
    }
    while letters.len() < length {
        let l = alphabet[rng.gen_range(0..alphabet.len())];
        if letters.last().is_some_and(|top| top.cancels(l)) {
            continue;
        }
        letters.push(l);
    }
    BraidWord {
        strands,
        theory,
        letters,
    }
}

pub fn random_braid(strands: usize, length: usize, theory: Theory, seed: u64) -> BraidWord {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_braid_with(&mut rng, strands, length, theory)
}

/// Braids that appear as worked examples in the literature on these groups.
pub mod named {
    use super::*;

    fn word(text: &str, strands: usize) -> BraidWord {
        BraidWord::parse(text, strands, Theory::Virtual).expect("well-formed literal")
    }

    /// `σ1² ρ1`, whose closure is the virtual trefoil.
    pub fn virtual_trefoil() -> BraidWord {
        word("s1 s1 r1", 2)
    }

    /// `ρ1 σ1 σ2 σ1 ρ1 σ1⁻¹ σ2⁻¹ σ1⁻¹`, whose closure is the Kishino knot.
    pub fn kishino() -> BraidWord {
        word("r1 s1 s2 s1 r1 s1^-1 s2^-1 s1^-1", 3)
    }

    /// The 22-letter 3-strand braid `Kb` with nontrivial image under ψ.
    pub fn kishino_kb() -> BraidWord {
        word(
            "s2 s1 r2 s1^-1 s2^-1 r1 s2^-1 s1^-1 r2 s1 s2 \
             s2 s1 r2 s1^-1 s2^-1 r1 s2^-1 s1^-1 r2 s1 s2",
            3,
        )
    }

    /// `b1 = σ2² σ1 ρ2 σ1⁻¹ σ2⁻¹ ρ1 σ2⁻¹ σ1⁻¹ ρ2 σ1`, with `Kb = σ2⁻¹ b1² σ2`.
    pub fn kishino_kb_factor() -> BraidWord {
        word("s2 s2 s1 r2 s1^-1 s2^-1 r1 s2^-1 s1^-1 r2 s1", 3)
    }

    /// `σ1 ρ1 σ1` on two strands, the first half of an exchange pair.
    pub fn exchange_half() -> BraidWord {
        word("s1 r1 s1", 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bw(text: &str, n: usize, t: Theory) -> BraidWord {
        BraidWord::parse(text, n, t).unwrap()
    }

    #[test]
    fn parse_examples() {
        let b = bw("s1 s1 r1", 2, Theory::Virtual);
        assert_eq!(
            b.letters(),
            [
                BraidLetter::sigma(1),
                BraidLetter::sigma(1),
                BraidLetter::rho(1)
            ]
        );
        assert_eq!(
            bw("s2^-1", 3, Theory::Classical).letters(),
            [BraidLetter::sigma_inv(2)]
        );
        assert_eq!(
            bw("a1 s2 s1", 3, Theory::Welded).letters(),
            [
                BraidLetter::alpha(1),
                BraidLetter::sigma(2),
                BraidLetter::sigma(1)
            ]
        );
    }

    #[test]
    fn parse_normalizes_signed_involutions() {
        assert_eq!(
            bw("r1^-1 s1", 2, Theory::Virtual),
            bw("r1 s1", 2, Theory::Virtual)
        );
        assert_eq!(bw("a2^-1", 3, Theory::Welded), bw("a2", 3, Theory::Welded));
        assert!(bw("r1 r1^-1", 2, Theory::Virtual).is_empty());
    }

    #[test]
    fn parse_errors() {
        let err = BraidWord::parse("s1 q2", 3, Theory::Classical).unwrap_err();
        assert!(matches!(err, Error::Parse { .. }));
        let err = BraidWord::parse("s3", 3, Theory::Classical).unwrap_err();
        assert_eq!(
            err,
            Error::PositionOutOfRange {
                position: 3,
                strands: 3
            }
        );
        let err = BraidWord::parse("s0", 3, Theory::Classical).unwrap_err();
        assert!(matches!(err, Error::PositionOutOfRange { .. }));
        let err = BraidWord::parse("r1", 3, Theory::Classical).unwrap_err();
        assert!(matches!(err, Error::IllegalLetter { .. }));
        let err = BraidWord::parse("a1", 3, Theory::Virtual).unwrap_err();
        assert!(matches!(err, Error::IllegalLetter { .. }));
        assert!(BraidWord::parse("s", 3, Theory::Classical).is_err());
        assert!(BraidWord::parse("s1^-2", 3, Theory::Classical).is_err());
    }

    #[test]
    fn serialize_examples() {
        assert_eq!(bw("s1 s1 r1", 2, Theory::Virtual).to_string(), "s1 s1 r1");
        assert_eq!(BraidWord::empty(3, Theory::Virtual).to_string(), "1");
        let b = BraidWord::new(
            3,
            Theory::Welded,
            [BraidLetter::sigma_inv(2), BraidLetter::alpha(1)],
        )
        .unwrap();
        assert_eq!(b.to_string(), "s2^-1 a1");
    }

    #[test]
    fn permutation_examples() {
        let t = named::virtual_trefoil();
        assert_eq!(t.underlying_permutation().images(), [1, 0]);
        assert_eq!(t.components(), 1);

        let e = BraidWord::empty(3, Theory::Virtual);
        assert_eq!(e.components(), 3);

        // (12)(12)(23)(12)(12)(12)(23)(12) composed left to right: a 3-cycle
        let c = named::kishino();
        assert!(c.underlying_permutation().is_full_cycle());
    }

    #[test]
    fn conjugate_examples() {
        let s1 = bw("s1", 2, Theory::Virtual);
        assert_eq!(
            s1.conjugate(BraidLetter::rho(1)).unwrap().to_string(),
            "r1 s1 r1"
        );
        let e = BraidWord::empty(2, Theory::Virtual);
        assert!(e.conjugate(BraidLetter::sigma(1)).unwrap().is_empty());
        let s11 = bw("s1 s1", 2, Theory::Virtual);
        assert_eq!(s11.conjugate(BraidLetter::sigma(1)).unwrap(), s11);
        assert!(s1.conjugate(BraidLetter::alpha(1)).is_err());
    }

    #[test]
    fn stabilize_examples() {
        let b = bw("s1 s1 r1", 2, Theory::Virtual);
        let st = b.stabilize(Stabilization::Positive).unwrap();
        assert_eq!(
            (st.to_string(), st.strands()),
            ("s1 s1 r1 s2".to_string(), 3)
        );

        let st = BraidWord::empty(1, Theory::Virtual)
            .stabilize(Stabilization::Virtual)
            .unwrap();
        assert_eq!((st.to_string(), st.strands()), ("r1".to_string(), 2));

        let st = bw("s1", 2, Theory::Virtual)
            .stabilize(Stabilization::Negative)
            .unwrap();
        assert_eq!((st.to_string(), st.strands()), ("s1 s2^-1".to_string(), 3));

        let st = bw("s1", 2, Theory::Welded)
            .stabilize(Stabilization::Virtual)
            .unwrap();
        assert_eq!(st.to_string(), "s1 a2");
        assert!(bw("s1", 2, Theory::Classical)
            .stabilize(Stabilization::Virtual)
            .is_err());
    }

    #[test]
    fn shift_examples() {
        assert_eq!(bw("s1", 2, Theory::Virtual).shift().to_string(), "s2");
        let sh = bw("r1 s1", 2, Theory::Virtual).shift();
        assert_eq!((sh.to_string(), sh.strands()), ("r2 s2".to_string(), 3));
        assert!(BraidWord::empty(2, Theory::Virtual).shift().is_empty());
    }

    #[test]
    fn exchange_examples() {
        let e = BraidWord::empty(2, Theory::Virtual);
        let (c, v) = exchange_pair(&e, &e, ExchangeSide::Right).unwrap();
        assert!(c.is_empty() && v.is_empty());
        assert_eq!(c.strands(), 3);

        let b1 = named::exchange_half();
        let b2 = b1.inverse();
        let (c, v) = exchange_pair(&b1, &b2, ExchangeSide::Right).unwrap();
        assert_eq!(c.to_string(), "s1 r1 s1 s2^-1 s1^-1 r1 s1^-1 s2");
        assert_eq!(v.to_string(), "s1 r1 s1 r2 s1^-1 r1 s1^-1 r2");

        let (c, v) = exchange_pair(&bw("s1", 2, Theory::Virtual), &e, ExchangeSide::Left).unwrap();
        assert_eq!(
            (c.to_string(), v.to_string()),
            ("s2".to_string(), "s2".to_string())
        );
    }

    #[test]
    fn exchange_errors() {
        let w = bw("s1", 2, Theory::Welded);
        assert!(matches!(
            exchange_pair(&w, &w, ExchangeSide::Right),
            Err(Error::TheoryMismatch { .. })
        ));
        let a = bw("s1", 2, Theory::Virtual);
        let b = bw("s1", 3, Theory::Virtual);
        assert!(matches!(
            exchange_pair(&a, &b, ExchangeSide::Left),
            Err(Error::StrandMismatch { .. })
        ));
    }

    fn relation(theory: Theory, n: usize, kind: RelationKind) -> DefiningRelation {
        defining_relations(theory, n)
            .into_iter()
            .find(|r| r.kind == kind && r.i == 1)
            .unwrap()
    }

    #[test]
    fn rewrite_examples() {
        let b = bw("s1 s2 s1", 3, Theory::Classical);
        let rel = relation(Theory::Classical, 3, RelationKind::Braid);
        assert_eq!(
            b.rewrite_with_relation(&rel, 0).unwrap().to_string(),
            "s2 s1 s2"
        );

        let b = bw("r1 r2 s1", 3, Theory::Virtual);
        let rel = relation(Theory::Virtual, 3, RelationKind::Mixed);
        assert_eq!(
            b.rewrite_with_relation(&rel, 0).unwrap().to_string(),
            "s2 r1 r2"
        );

        let err = b.rewrite_with_relation(&rel, 1).unwrap_err();
        assert!(matches!(err, Error::NoMatch { .. }));
    }

    #[test]
    fn relation_catalogue_sizes() {
        // B_4: 2 braid + 1 far commutation
        assert_eq!(defining_relations(Theory::Classical, 4).len(), 3);
        // VB_4: 3 sigma + 3 rho + 3 involutions + 2 mixed-far + 2 mixed
        assert_eq!(defining_relations(Theory::Virtual, 4).len(), 13);
        // WB_4 adds the two F1-type relations
        assert_eq!(defining_relations(Theory::Welded, 4).len(), 15);
        assert_eq!(forbidden_relations(3).len(), 2);
    }

    #[test]
    fn kb_factorization() {
        let kb = named::kishino_kb();
        assert_eq!(kb.len(), 22);
        let b1 = named::kishino_kb_factor();
        let s2 = bw("s2", 3, Theory::Virtual);
        let rebuilt = s2
            .inverse()
            .concat(&b1)
            .unwrap()
            .concat(&b1)
            .unwrap()
            .concat(&s2)
            .unwrap();
        assert_eq!(rebuilt, kb);
    }

    #[test]
    fn random_braid_is_deterministic() {
        let a = random_braid(4, 12, Theory::Virtual, 7);
        let b = random_braid(4, 12, Theory::Virtual, 7);
        assert_eq!(a, b);
        assert_eq!(a.len(), 12);
        assert!(random_braid(3, 0, Theory::Welded, 1).is_empty());
        for l in random_braid(3, 50, Theory::Welded, 9).letters() {
            assert!(l.position < 3);
            assert_ne!(l.family, Family::Rho);
        }
    }
}
