//! Finite presentations of link groups, Tietze simplification, and abelian
//! invariants via Smith normal form.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::braid::BraidWord;
use crate::error::{Error, Result};
use crate::freegroup::{Ambient, Endomorphism, GeneratorId, Letter, Word};
use crate::matrix::{smith_normal_form, IntegerMatrix};
use crate::reps::{RepKind, Representation};

/// Default cap on the total number of relator letters during simplification.
pub const DEFAULT_BUDGET: usize = 100_000;

/// A finite presentation. Relators are cyclically reduced and nonempty.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Presentation {
    generators: Vec<GeneratorId>,
    relators: Vec<Word>,
}

impl Presentation {
    /// Cyclically reduces the relators and drops trivial ones.
    pub fn new(generators: Vec<GeneratorId>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(g) = generators.iter().find(|g| !seen.insert(**g)) {
            return Err(Error::InvalidPresentation(format!(
                "generator {g} listed twice"
            )));
        }
        let ambient = Ambient::spanning(&generators);
        let mut kept = Vec::with_capacity(relators.len());
        for r in relators {
            if let Some(l) = r.letters().iter().find(|l| !seen.contains(&l.gen)) {
                return Err(Error::InvalidPresentation(format!(
                    "relator uses {} which is not a generator",
                    l.gen
                )));
            }
            let (core, _) = r.cyclic_reduce();
            if !core.is_identity() {
                kept.push(core.with_ambient(ambient)?);
            }
        }
        Ok(Presentation {
            generators,
            relators: kept,
        })
    }

    /// The free group on the given generators.
    pub fn free(generators: Vec<GeneratorId>) -> Result<Self> {
        Presentation::new(generators, Vec::new())
    }

    pub fn generators(&self) -> &[GeneratorId] {
        &self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn ambient(&self) -> Ambient {
        Ambient::spanning(&self.generators)
    }

    pub fn total_length(&self) -> usize {
        self.relators.iter().map(Word::len).sum()
    }

    pub fn has_generator(&self, g: GeneratorId) -> bool {
        self.generators.contains(&g)
    }

    /// Parses a relator against this presentation's generators.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        Word::parse(text, self.ambient())
    }

    pub fn to_structured(&self) -> StructuredPresentation {
        StructuredPresentation {
            generators: self.generators.clone(),
            relators: self.relators.iter().map(|r| r.to_string()).collect(),
        }
    }

    pub fn from_structured(doc: &StructuredPresentation) -> Result<Self> {
        let ambient = Ambient::spanning(&doc.generators);
        let relators = doc
            .relators
            .iter()
            .map(|r| Word::parse(r, ambient))
            .collect::<Result<Vec<_>>>()?;
        Presentation::new(doc.generators.clone(), relators)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_structured()).expect("plain data serializes")
    }

    /// Reads either the line-oriented text form or the structured JSON form.
    pub fn parse_any(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            let doc: StructuredPresentation = serde_json::from_str(text)
                .map_err(|e| Error::InvalidPresentation(e.to_string()))?;
            Presentation::from_structured(&doc)
        } else {
            text.parse()
        }
    }
}

/// Machine-readable form: `{"generators": [...], "relators": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuredPresentation {
    pub generators: Vec<GeneratorId>,
    pub relators: Vec<String>,
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|g| g.to_string()).collect();
        writeln!(f, "gens: {}", gens.join(" "))?;
        for r in &self.relators {
            writeln!(f, "rel: {r}")?;
        }
        Ok(())
    }
}

impl FromStr for Presentation {
    type Err = Error;

    /// `gens: x1 x2 y` followed by `rel: <word>` lines. Blank lines and lines
    /// starting with `#` are ignored.
    fn from_str(text: &str) -> Result<Self> {
        let mut generators = None;
        let mut raw_relators = Vec::new();
        for line in text.lines().map(str::trim) {
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("gens:") {
                if generators.is_some() {
                    return Err(Error::InvalidPresentation("duplicate gens line".into()));
                }
                generators = Some(
                    rest.split_whitespace()
                        .map(str::parse)
                        .collect::<Result<Vec<GeneratorId>>>()?,
                );
            } else if let Some(rest) = line.strip_prefix("rel:") {
                raw_relators.push(rest.trim().to_string());
            } else {
                return Err(Error::InvalidPresentation(format!(
                    "unrecognized line `{line}`"
                )));
            }
        }
        let generators =
            generators.ok_or_else(|| Error::InvalidPresentation("missing gens line".into()))?;
        Presentation::from_structured(&StructuredPresentation {
            generators,
            relators: raw_relators,
        })
    }
}

/// `<x_1..x_n, (y) || x_i^-1 · rep(b)(x_i)>` for every generator `x_i`.
fn closure_group(rep: &Representation, b: &BraidWord) -> Result<Presentation> {
    let e = rep.evaluate(b)?;
    let ambient = rep.ambient();
    let relators = (1..=rep.strands() as u32)
        .map(|k| {
            let x = GeneratorId::X(k);
            Word::generator(ambient, x)?
                .inverse()
                .concat(e.image(x).expect("x in domain"))
        })
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(ambient.generators().collect(), relators)
}

/// `G_v`: the group of the closure of a virtual braid, via ψ.
pub fn group_of_virtual_link(b: &BraidWord) -> Result<Presentation> {
    closure_group(&Representation::new(RepKind::Psi, b.strands())?, b)
}

/// `G_w`: the group of the closure of a welded braid.
pub fn group_of_welded_link(b: &BraidWord) -> Result<Presentation> {
    closure_group(&Representation::new(RepKind::Welded, b.strands())?, b)
}

/// The classical link group from the Artin action.
pub fn group_of_classical_link(b: &BraidWord) -> Result<Presentation> {
    closure_group(&Representation::new(RepKind::Artin, b.strands())?, b)
}

/// The Wada group of type `k` (1 or 2 only) of a welded braid.
pub fn wada_group(b: &BraidWord, k: u8, h: i64) -> Result<Presentation> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedWada(k));
    }
    closure_group(&Representation::new(RepKind::wada(k, h)?, b.strands())?, b)
}

/// Adds the relator `y` (kills the normal closure of `y`) and eliminates it.
pub fn quotient_y(p: &Presentation) -> Result<Presentation> {
    if !p.has_generator(GeneratorId::Y) {
        return Err(Error::MissingY);
    }
    let generators: Vec<_> = p
        .generators
        .iter()
        .copied()
        .filter(|&g| g != GeneratorId::Y)
        .collect();
    let ambient = Ambient::spanning(&generators);
    let relators = p
        .relators
        .iter()
        .map(|r| r.erase(GeneratorId::Y).with_ambient(ambient))
        .collect::<Result<Vec<_>>>()?;
    Presentation::new(generators, relators)
}

/// Key identifying a relator up to cyclic permutation and inversion.
fn cyclic_class(r: &Word) -> Vec<Letter> {
    let inv = r.inverse();
    (0..r.len())
        .flat_map(|k| [r.rotate(k), inv.rotate(k)])
        .map(|w| w.letters().to_vec())
        .min()
        .unwrap_or_default()
}

/// Where to eliminate next: the shortest relator containing a generator that
/// occurs in it exactly once. Among such generators the highest-indexed `x`
/// is preferred and `y` is used only as a last resort.
fn pick_elimination(p: &Presentation) -> Option<(usize, GeneratorId)> {
    let mut order: Vec<usize> = (0..p.relators.len()).collect();
    order.sort_by_key(|&i| (p.relators[i].len(), i));
    order.into_iter().find_map(|i| {
        let r = &p.relators[i];
        p.generators
            .iter()
            .copied()
            .filter(|&g| r.occurrences(g) == 1)
            .max_by_key(|g| match g {
                GeneratorId::X(k) => i64::from(*k),
                GeneratorId::Y => -1,
            })
            .map(|g| (i, g))
    })
}

/// One Tietze step, or `None` at a fixpoint. A step either drops a relator
/// that repeats another one up to cyclic permutation and inversion, or
/// solves a relator for a generator occurring in it once and substitutes.
pub fn tietze_step(p: &Presentation) -> Result<Option<Presentation>> {
    let mut seen = HashSet::new();
    if let Some(dup) = p
        .relators
        .iter()
        .position(|r| !seen.insert(cyclic_class(r)))
    {
        let mut relators = p.relators.clone();
        relators.remove(dup);
        return Ok(Some(Presentation {
            generators: p.generators.clone(),
            relators,
        }));
    }

    let Some((idx, g)) = pick_elimination(p) else {
        return Ok(None);
    };
    let r = &p.relators[idx];
    let pos = r
        .letters()
        .iter()
        .position(|l| l.gen == g)
        .expect("occurs once");
    // rotate so that r = g^e · rest; then g = rest^-1 (e = 1) or g = rest (e = -1)
    let rotated = r.rotate(pos);
    let inverse = rotated.letters()[0].inverse;
    let rest = Word::from_letters(p.ambient(), rotated.letters()[1..].iter().copied())?;
    let replacement = if inverse { rest } else { rest.inverse() };

    let subst = Endomorphism::with_images(p.ambient(), &[(g, replacement)])?;
    let relators = p
        .relators
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != idx)
        .map(|(_, w)| subst.apply(w))
        .collect::<Result<Vec<_>>>()?;
    let generators = p.generators.iter().copied().filter(|&h| h != g).collect();
    Presentation::new(generators, relators).map(Some)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simplified {
    pub presentation: Presentation,
    /// True when simplification stopped because the next step would have
    /// exceeded the letter budget; `presentation` is the last state within it.
    pub exhausted: bool,
    pub steps: usize,
}

pub fn tietze_simplify(p: &Presentation, budget: usize) -> Result<Simplified> {
    let mut current = p.clone();
    let mut steps = 0;
    if current.total_length() > budget {
        return Ok(Simplified {
            presentation: current,
            exhausted: true,
            steps,
        });
    }
    loop {
        let next = match tietze_step(&current) {
            Ok(Some(next)) => next,
            Ok(None) => break,
            Err(Error::WordTooLong { .. }) => {
                return Ok(Simplified {
                    presentation: current,
                    exhausted: true,
                    steps,
                })
            }
            Err(e) => return Err(e),
        };
        if next.total_length() > budget {
            return Ok(Simplified {
                presentation: current,
                exhausted: true,
                steps,
            });
        }
        current = next;
        steps += 1;
    }
    Ok(Simplified {
        presentation: current,
        exhausted: false,
        steps,
    })
}

/// `Some(k)` when simplification reaches `k` generators and no relators, which
/// certifies the group is free of rank `k`. `None` is inconclusive.
pub fn free_rank_certificate(p: &Presentation) -> Result<Option<usize>> {
    let s = tietze_simplify(p, DEFAULT_BUDGET)?;
    let q = &s.presentation;
    Ok(q.relators.is_empty().then_some(q.generators.len()))
}

/// Exponent sums: one row per relator, one column per generator.
pub fn relation_matrix(p: &Presentation) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(p.relators.len(), p.generators.len());
    for (i, r) in p.relators.iter().enumerate() {
        for (j, &g) in p.generators.iter().enumerate() {
            m[(i, j)] = i128::from(r.exponent_sum(g));
        }
    }
    m
}

/// `Z^free_rank ⊕ Z/d_1 ⊕ ... ⊕ Z/d_k` with `d_1 | d_2 | ... | d_k`, all `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub free_rank: usize,
    pub torsion: Vec<u128>,
}

impl AbelianInvariants {
    pub fn free(rank: usize) -> Self {
        AbelianInvariants {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }
}

impl fmt::Display for AbelianInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}

pub fn abelian_invariants(p: &Presentation) -> Result<AbelianInvariants> {
    let snf = smith_normal_form(&relation_matrix(p))?;
    let torsion = snf
        .diagonal
        .iter()
        .filter(|&&d| d >= 2)
        .map(|&d| d as u128)
        .collect();
    Ok(AbelianInvariants {
        free_rank: p.generators.len() - snf.rank(),
        torsion,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{named, Theory};

    const X1: GeneratorId = GeneratorId::X(1);
    const X2: GeneratorId = GeneratorId::X(2);
    const Y: GeneratorId = GeneratorId::Y;

    fn pres(text: &str) -> Presentation {
        text.parse().unwrap()
    }

    #[test]
    fn text_format_round_trip() {
        let p = pres("gens: x1 x2 y\nrel: y x1 y^-1 x2^-1\n");
        assert_eq!(p.to_string(), "gens: x1 x2 y\nrel: y x1 y^-1 x2^-1\n");
        assert_eq!(Presentation::parse_any(&p.to_json()).unwrap(), p);
        assert_eq!(pres("gens:\n").generators().len(), 0);
    }

    #[test]
    fn text_format_errors() {
        assert!("rel: x1".parse::<Presentation>().is_err());
        assert!("gens: x1\nrel: x2".parse::<Presentation>().is_err());
        assert!("gens: x1 x1".parse::<Presentation>().is_err());
        assert!("gens: x1\nfoo".parse::<Presentation>().is_err());
    }

    #[test]
    fn relators_are_cyclically_reduced_and_nontrivial() {
        let p = pres("gens: x1 x2\nrel: x1 x1^-1\nrel: x2^-1 x1 x2\n");
        assert_eq!(p.relators().len(), 1);
        assert_eq!(p.relators()[0].to_string(), "x1");
    }

    #[test]
    fn unknot_group_is_free_of_rank_two() {
        let p = group_of_virtual_link(&BraidWord::empty(1, Theory::Virtual)).unwrap();
        assert_eq!(p.generators(), [X1, Y]);
        assert!(p.relators().is_empty());
    }

    #[test]
    fn virtual_trefoil_presentation() {
        let p = group_of_virtual_link(&named::virtual_trefoil()).unwrap();
        assert_eq!(p.relators().len(), 2);
        let m = relation_matrix(&p);
        assert_eq!(m, IntegerMatrix::from_rows(&[[-1, 1, 0], [1, -1, 0]]));
        let s = tietze_simplify(&p, DEFAULT_BUDGET).unwrap();
        assert!(!s.exhausted);
        assert_eq!(s.presentation.generators().len(), 2);
        assert_eq!(s.presentation.relators().len(), 1);
        assert_eq!(free_rank_certificate(&p).unwrap(), None);
    }

    #[test]
    fn welded_and_classical_groups() {
        let p = group_of_welded_link(&BraidWord::empty(1, Theory::Welded)).unwrap();
        assert_eq!(abelian_invariants(&p).unwrap(), AbelianInvariants::free(1));

        let hopf = BraidWord::parse("s1 s1", 2, Theory::Classical).unwrap();
        let p = group_of_classical_link(&hopf).unwrap();
        assert_eq!(abelian_invariants(&p).unwrap(), AbelianInvariants::free(2));

        let trefoil = BraidWord::parse("s1 s1 s1", 2, Theory::Classical).unwrap();
        let p = group_of_classical_link(&trefoil).unwrap();
        assert_eq!(abelian_invariants(&p).unwrap(), AbelianInvariants::free(1));
        let as_welded =
            group_of_welded_link(&trefoil.with_theory(Theory::Welded).unwrap()).unwrap();
        assert_eq!(as_welded, p);
    }

    #[test]
    fn welded_group_is_y_quotient() {
        let b = named::virtual_trefoil();
        let q = quotient_y(&group_of_virtual_link(&b).unwrap()).unwrap();
        let w = group_of_welded_link(&b.to_welded().unwrap()).unwrap();
        assert_eq!(q, w);
        assert_eq!(abelian_invariants(&q).unwrap(), AbelianInvariants::free(1));
    }

    #[test]
    fn wada_groups() {
        let e = BraidWord::empty(2, Theory::Welded);
        let p = wada_group(&e, 2, 1).unwrap();
        assert_eq!((p.generators().len(), p.relators().len()), (2, 0));

        let s1 = BraidWord::parse("s1", 2, Theory::Welded).unwrap();
        let s = tietze_simplify(&wada_group(&s1, 2, 1).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.presentation.generators(), [X1]);
        assert!(s.presentation.relators().is_empty());

        let a1 = BraidWord::parse("a1", 2, Theory::Welded).unwrap();
        let s = tietze_simplify(&wada_group(&a1, 1, 1).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(s.presentation.generators(), [X1]);
        assert!(s.presentation.relators().is_empty());

        assert_eq!(
            wada_group(&s1, 3, 1).unwrap_err(),
            Error::UnsupportedWada(3)
        );
        assert_eq!(
            wada_group(&s1, 4, 1).unwrap_err(),
            Error::UnsupportedWada(4)
        );
    }

    #[test]
    fn quotient_y_examples() {
        let q = quotient_y(&pres("gens: x1 y\n")).unwrap();
        assert_eq!(q, pres("gens: x1\n"));
        assert_eq!(
            quotient_y(&pres("gens: x1\n")).unwrap_err(),
            Error::MissingY
        );
    }

    #[test]
    fn tietze_eliminates_x2() {
        let p = pres("gens: x1 x2 y\nrel: y x1 y^-1 x2^-1\n");
        let s = tietze_simplify(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.presentation, pres("gens: x1 y\n"));
        assert_eq!(s.steps, 1);
    }

    #[test]
    fn tietze_fixpoint_leaves_presentation_alone() {
        let p = pres("gens: x1 x2\nrel: x1 x2 x1^-1 x2^-1\n");
        let s = tietze_simplify(&p, DEFAULT_BUDGET).unwrap();
        assert_eq!((s.presentation, s.steps, s.exhausted), (p, 0, false));
    }

    #[test]
    fn tietze_drops_repeated_relators() {
        // the second relator is a rotation of the inverse of the first
        let p = pres("gens: x1 x2 x3\nrel: x2 x1^-1 x3 x3\nrel: x1 x2^-1 x3^-1 x3^-1\n");
        let next = tietze_step(&p).unwrap().unwrap();
        assert_eq!(next.relators().len(), 1);
    }

    #[test]
    fn tietze_budget_is_reported() {
        let p = pres("gens: x1 x2\nrel: x1 x2 x1^-1 x2^-1\n");
        let s = tietze_simplify(&p, 2).unwrap();
        assert!(s.exhausted);
        assert_eq!(s.presentation, p);
    }

    #[test]
    fn relation_matrix_examples() {
        let m = relation_matrix(&pres("gens: x1\nrel: x1 x1\n"));
        assert_eq!(m, IntegerMatrix::from_rows(&[[2]]));
        let m = relation_matrix(&pres("gens: x1 x2\nrel: x1 x2 x1^-1 x2^-1\n"));
        assert!(m.is_zero());
        assert_eq!((m.rows(), m.cols()), (1, 2));
    }

    #[test]
    fn abelian_invariants_examples() {
        assert_eq!(
            abelian_invariants(&pres("gens: x1 y\n")).unwrap(),
            AbelianInvariants::free(2)
        );
        let z2 = abelian_invariants(&pres("gens: x1\nrel: x1 x1\n")).unwrap();
        assert_eq!((z2.free_rank, z2.torsion.clone()), (0, vec![2]));
        assert_eq!(z2.to_string(), "Z/2");
        let p = group_of_virtual_link(&named::virtual_trefoil()).unwrap();
        assert_eq!(abelian_invariants(&p).unwrap(), AbelianInvariants::free(2));
    }

    #[test]
    fn kishino_group_is_free_of_rank_two() {
        let p = group_of_virtual_link(&named::kishino()).unwrap();
        assert_eq!(p.relators().len(), 3);
        assert_eq!(free_rank_certificate(&p).unwrap(), Some(2));
        let q = quotient_y(&p).unwrap();
        assert_eq!(abelian_invariants(&q).unwrap(), AbelianInvariants::free(1));
    }

    #[test]
    fn free_rank_certificate_of_free_group() {
        assert_eq!(
            free_rank_certificate(&pres("gens: x1 y\n")).unwrap(),
            Some(2)
        );
    }

    #[test]
    fn word_parse_uses_presentation_ambient() {
        let p = pres("gens: x1 x2\n");
        assert_eq!(p.parse_word("x2 x1^-1").unwrap().len(), 2);
        assert!(p.parse_word("y").is_err());
        assert!(p.has_generator(X2));
    }
}
