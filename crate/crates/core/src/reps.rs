//! Braid groups acting on free groups: the Artin action of `B_n`, the
//! extension ψ of `VB_n` to `<x1..xn, y>`, the conjugating action of `WB_n`,
//! and the Wada-type actions χ_k.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::braid::{
    defining_relations, BraidLetter, BraidWord, DefiningRelation, Family, Sign, Theory,
};
use crate::error::{Error, Result};
use crate::freegroup::{Ambient, Automorphism, Endomorphism, GeneratorId, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// `B_n -> Aut(F_n)`
    Artin,
    /// `VB_n -> Aut(F_{n+1})`, `F_{n+1} = <x1..xn, y>`
    Psi,
    /// `WB_n -> Aut(F_n)` by conjugating automorphisms
    Welded,
    /// Wada type `kind` on the `σ`s, the plain swap on the `α`s. The exponent
    /// `h` only affects type 1.
    Wada { kind: u8, h: i64 },
}

impl RepKind {
    pub fn wada(kind: u8, h: i64) -> Result<Self> {
        if !(1..=4).contains(&kind) {
            return Err(Error::parse(
                format!("wada{kind}"),
                "Wada type must be 1, 2, 3 or 4",
            ));
        }
        Ok(RepKind::Wada { kind, h })
    }

    pub fn theory(self) -> Theory {
        match self {
            RepKind::Artin => Theory::Classical,
            RepKind::Psi => Theory::Virtual,
            RepKind::Welded | RepKind::Wada { .. } => Theory::Welded,
        }
    }
}

impl fmt::Display for RepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepKind::Artin => f.write_str("artin"),
            RepKind::Psi => f.write_str("psi"),
            RepKind::Welded => f.write_str("welded"),
            RepKind::Wada { kind: 1, h } => write!(f, "wada1(h={h})"),
            RepKind::Wada { kind, .. } => write!(f, "wada{kind}"),
        }
    }
}

impl FromStr for RepKind {
    type Err = Error;

    /// Accepts `artin`, `psi`, `welded`, `wada1` .. `wada4` (type 1 with h = 1).
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "artin" => Ok(RepKind::Artin),
            "psi" => Ok(RepKind::Psi),
            "welded" => Ok(RepKind::Welded),
            _ => {
                let k = s
                    .strip_prefix("wada")
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| {
                        Error::parse(s, "expected artin, psi, welded or wada1..wada4")
                    })?;
                RepKind::wada(k, 1)
            }
        }
    }
}

/// A representation evaluated on `strands` strands, with the generator
/// actions precomputed and their inverses verified.
#[derive(Debug, Clone)]
pub struct Representation {
    kind: RepKind,
    strands: usize,
    actions: HashMap<BraidLetter, Automorphism>,
}

impl Representation {
    pub fn new(kind: RepKind, strands: usize) -> Result<Self> {
        if strands == 0 {
            return Err(Error::PositionOutOfRange {
                position: 0,
                strands,
            });
        }
        let mut actions = HashMap::new();
        for letter in crate::braid::alphabet(strands, kind.theory()) {
            if let Family::Sigma(Sign::Pos) | Family::Rho | Family::Alpha = letter.family {
                let aut = build_action(kind, strands, letter)?;
                if letter.family == Family::Sigma(Sign::Pos) {
                    actions.insert(letter.inverse(), aut.inverted());
                }
                actions.insert(letter, aut);
            }
        }
        Ok(Representation {
            kind,
            strands,
            actions,
        })
    }

    pub fn kind(&self) -> RepKind {
        self.kind
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn theory(&self) -> Theory {
        self.kind.theory()
    }

    /// The free group acted on.
    pub fn ambient(&self) -> Ambient {
        match self.kind {
            RepKind::Psi => Ambient::with_y(self.strands as u32),
            _ => Ambient::free(self.strands as u32),
        }
    }

    pub fn generator_action(&self, letter: BraidLetter) -> Result<&Automorphism> {
        if !self.theory().allows(letter.family) {
            return Err(Error::IllegalLetter {
                letter: letter.to_string(),
                theory: self.theory().to_string(),
            });
        }
        self.actions.get(&letter).ok_or(Error::PositionOutOfRange {
            position: letter.position,
            strands: self.strands,
        })
    }

    pub fn evaluate_letters(&self, letters: &[BraidLetter]) -> Result<Endomorphism> {
        let mut acc = Endomorphism::identity(self.ambient());
        for &l in letters {
            acc = acc.compose(self.generator_action(l)?.forward())?;
        }
        Ok(acc)
    }

    /// Image of a braid word, composing generator actions left to right.
    /// Classical words are accepted by every representation.
    pub fn evaluate(&self, b: &BraidWord) -> Result<Endomorphism> {
        if b.strands() != self.strands {
            return Err(Error::StrandMismatch {
                left: self.strands,
                right: b.strands(),
            });
        }
        if let Some(l) = b.letters().iter().find(|l| !self.theory().allows(l.family)) {
            return Err(Error::TheoryMismatch {
                expected: self.theory().to_string(),
                found: format!("{} (letter {l})", b.theory()),
            });
        }
        self.evaluate_letters(b.letters())
    }

    /// Evaluates both sides of every defining relation of the representation's
    /// theory, plus `extra`, and reports each one.
    pub fn check_relations(&self, extra: &[DefiningRelation]) -> Result<Vec<RelationReport>> {
        defining_relations(self.theory(), self.strands)
            .iter()
            .chain(extra)
            .map(|rel| self.check_relation(rel))
            .collect()
    }

    pub fn check_relation(&self, rel: &DefiningRelation) -> Result<RelationReport> {
        let left = self.evaluate_letters(&rel.left)?;
        let right = self.evaluate_letters(&rel.right)?;
        let witness = self
            .ambient()
            .generators()
            .zip(left.images().iter().zip(right.images()))
            .find(|(_, (l, r))| l != r)
            .map(|(generator, (l, r))| Witness {
                generator,
                left: l.clone(),
                right: r.clone(),
            });
        Ok(RelationReport {
            relation: rel.clone(),
            holds: witness.is_none(),
            witness,
        })
    }
}

fn build_action(kind: RepKind, n: usize, letter: BraidLetter) -> Result<Automorphism> {
    let amb = match kind {
        RepKind::Psi => Ambient::with_y(n as u32),
        _ => Ambient::free(n as u32),
    };
    let i = letter.position as u32;
    let (a, b) = (GeneratorId::X(i), GeneratorId::X(i + 1));
    let gen = |g| Word::generator(amb, g).expect("generator in ambient");
    let (xa, xb) = (gen(a), gen(b));
    let word = |parts: &[&Word]| -> Result<Word> {
        parts
            .iter()
            .try_fold(Word::identity(amb), |acc, w| acc.concat(w))
    };
    let pair = |img_a: Word, img_b: Word| Endomorphism::with_images(amb, &[(a, img_a), (b, img_b)]);

    let (forward, inverse) = match letter.family {
        Family::Sigma(_) => {
            let (ia, ib) = (xa.inverse(), xb.inverse());
            match kind {
                RepKind::Artin | RepKind::Psi | RepKind::Welded => (
                    // a -> a b a^-1, b -> a
                    pair(word(&[&xa, &xb, &ia])?, xa.clone())?,
                    pair(xb.clone(), word(&[&ib, &xa, &xb])?)?,
                ),
                RepKind::Wada { kind: 1, h } => {
                    let (ah, bh) = (xa.pow(h)?, xb.pow(h)?);
                    (
                        pair(word(&[&ah, &xb, &ah.inverse()])?, xa.clone())?,
                        pair(xb.clone(), word(&[&bh.inverse(), &xa, &bh])?)?,
                    )
                }
                RepKind::Wada { kind: 2, .. } => (
                    // a -> a b^-1 a, b -> a
                    pair(word(&[&xa, &ib, &xa])?, xa.clone())?,
                    pair(xb.clone(), word(&[&xb, &ia, &xb])?)?,
                ),
                RepKind::Wada { kind: 3, .. } => (
                    // a -> a b a, b -> a^-1
                    pair(word(&[&xa, &xb, &xa])?, ia.clone())?,
                    pair(ib.clone(), word(&[&xb, &xa, &xb])?)?,
                ),
                RepKind::Wada { kind: 4, .. } => (
                    // a -> a^2 b, b -> b^-1 a^-1 b
                    pair(word(&[&xa, &xa, &xb])?, word(&[&ib, &ia, &xb])?)?,
                    pair(word(&[&xa, &ib, &ia])?, word(&[&xa, &xb, &xb])?)?,
                ),
                RepKind::Wada { kind, .. } => return Err(Error::UnsupportedWada(kind)),
            }
        }
        Family::Rho => {
            let y = gen(GeneratorId::Y);
            let iy = y.inverse();
            let e = pair(word(&[&y, &xb, &iy])?, word(&[&iy, &xa, &y])?)?;
            (e.clone(), e)
        }
        Family::Alpha => {
            let e = pair(xb.clone(), xa.clone())?;
            (e.clone(), e)
        }
    };
    let aut = Automorphism::new(forward, inverse)?;
    Ok(match letter.family {
        Family::Sigma(Sign::Neg) => aut.inverted(),
        _ => aut,
    })
}

/// The generator where the two sides of a failed relation differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub generator: GeneratorId,
    pub left: Word,
    pub right: Word,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub relation: DefiningRelation,
    pub holds: bool,
    pub witness: Option<Witness>,
}

impl fmt::Display for RelationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.holds { "PASS" } else { "FAIL" };
        write!(f, "{status} {}", self.relation)?;
        if let Some(w) = &self.witness {
            write!(f, " | {}: left {} | right {}", w.generator, w.left, w.right)?;
        }
        Ok(())
    }
}

/// Kills `y`: maps an endomorphism of `<x1..xn, y>` to one of `<x1..xn>`.
pub fn project_y(e: &Endomorphism) -> Result<Endomorphism> {
    e.erase_generator(GeneratorId::Y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{forbidden_relations, named, RelationKind};

    fn rep(kind: RepKind, n: usize) -> Representation {
        Representation::new(kind, n).unwrap()
    }

    fn image(e: &Endomorphism, g: GeneratorId) -> String {
        e.image(g).unwrap().to_string()
    }

    #[test]
    fn psi_rho_action() {
        let r = rep(RepKind::Psi, 2);
        let a = r.generator_action(BraidLetter::rho(1)).unwrap().forward();
        assert_eq!(image(a, GeneratorId::X(1)), "y x2 y^-1");
        assert_eq!(image(a, GeneratorId::X(2)), "y^-1 x1 y");
        assert_eq!(image(a, GeneratorId::Y), "y");
    }

    #[test]
    fn wada4_sigma_action() {
        let r = rep(RepKind::wada(4, 1).unwrap(), 2);
        let a = r.generator_action(BraidLetter::sigma(1)).unwrap().forward();
        assert_eq!(image(a, GeneratorId::X(1)), "x1 x1 x2");
        assert_eq!(image(a, GeneratorId::X(2)), "x2^-1 x1^-1 x2");
    }

    #[test]
    fn artin_sigma_inverse_action() {
        let r = rep(RepKind::Artin, 2);
        let a = r
            .generator_action(BraidLetter::sigma_inv(1))
            .unwrap()
            .forward();
        assert_eq!(image(a, GeneratorId::X(1)), "x2");
        assert_eq!(image(a, GeneratorId::X(2)), "x2^-1 x1 x2");
    }

    #[test]
    fn illegal_letters_rejected() {
        let r = rep(RepKind::Artin, 3);
        assert!(matches!(
            r.generator_action(BraidLetter::rho(1)),
            Err(Error::IllegalLetter { .. })
        ));
        let w = rep(RepKind::Welded, 3);
        let b = named::virtual_trefoil().embed(3).unwrap();
        assert!(matches!(w.evaluate(&b), Err(Error::TheoryMismatch { .. })));
        let p = rep(RepKind::Psi, 3);
        assert!(matches!(
            p.evaluate(&named::virtual_trefoil()),
            Err(Error::StrandMismatch { .. })
        ));
    }

    #[test]
    fn evaluate_virtual_trefoil() {
        // x2 -> x1 -> x1 x2 x1^-1 -> (y x2 y^-1)(y^-1 x1 y)(y x2^-1 y^-1)
        let e = rep(RepKind::Psi, 2)
            .evaluate(&named::virtual_trefoil())
            .unwrap();
        assert_eq!(
            image(&e, GeneratorId::X(2)),
            "y x2 y^-1 y^-1 x1 y y x2^-1 y^-1"
        );
    }

    #[test]
    fn evaluate_empty_is_identity() {
        for kind in [
            RepKind::Artin,
            RepKind::Psi,
            RepKind::Welded,
            RepKind::wada(2, 1).unwrap(),
        ] {
            let r = rep(kind, 3);
            let e = r.evaluate(&BraidWord::empty(3, kind.theory())).unwrap();
            assert!(e.is_identity());
        }
    }

    #[test]
    fn psi_relations_hold_n4() {
        let reports = rep(RepKind::Psi, 4).check_relations(&[]).unwrap();
        assert!(reports.iter().all(|r| r.holds), "{reports:#?}");
    }

    #[test]
    fn psi_forbidden_f1_witness() {
        let reports = rep(RepKind::Psi, 3)
            .check_relations(&forbidden_relations(3))
            .unwrap();
        let f1 = reports
            .iter()
            .find(|r| r.relation.kind == RelationKind::F1)
            .unwrap();
        let w = f1.witness.as_ref().unwrap();
        assert_eq!(w.generator, GeneratorId::X(1));
        assert_eq!(w.left.to_string(), "y x1 x3 x1^-1 y^-1");
        assert_eq!(w.right.to_string(), "x1 y x3 y^-1 x1^-1");
    }

    #[test]
    fn wada3_fails_only_at_f1_type_relation() {
        let reports = rep(RepKind::wada(3, 1).unwrap(), 3)
            .check_relations(&[])
            .unwrap();
        let failed: Vec<_> = reports.iter().filter(|r| !r.holds).collect();
        assert_eq!(failed.len(), 1);
        assert_eq!(failed[0].relation.kind, RelationKind::F1);
        assert_eq!(
            failed[0].relation.to_string(),
            "F1(i=1): a1 s2 s1 = s2 s1 a2"
        );
    }

    #[test]
    fn project_y_examples() {
        let p = rep(RepKind::Psi, 2);
        let rho = p.generator_action(BraidLetter::rho(1)).unwrap().forward();
        let swapped = project_y(rho).unwrap();
        assert_eq!(image(&swapped, GeneratorId::X(1)), "x2");
        assert_eq!(image(&swapped, GeneratorId::X(2)), "x1");

        let sigma = p.generator_action(BraidLetter::sigma(1)).unwrap().forward();
        let welded = rep(RepKind::Welded, 2);
        assert_eq!(
            &project_y(sigma).unwrap(),
            welded
                .generator_action(BraidLetter::sigma(1))
                .unwrap()
                .forward()
        );

        let id = project_y(&Endomorphism::identity(Ambient::with_y(2))).unwrap();
        assert_eq!(id, Endomorphism::identity(Ambient::free(2)));
    }

    #[test]
    fn rep_names_parse() {
        assert_eq!("psi".parse::<RepKind>().unwrap(), RepKind::Psi);
        assert_eq!(
            "wada3".parse::<RepKind>().unwrap(),
            RepKind::Wada { kind: 3, h: 1 }
        );
        assert!("wada5".parse::<RepKind>().is_err());
        assert!("burau".parse::<RepKind>().is_err());
    }
}
