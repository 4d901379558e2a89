//! Reduced words in free groups `<x1, ..., xn>` or `<x1, ..., xn, y>`, and
//! endomorphisms given by generator images.
//!
//! Endomorphisms act on the right, so `f.compose(&g)` means "apply `f`, then
//! `g`": the image of `x` is `g.apply(f.apply(x))`. This is the convention in
//! which braid words are evaluated left to right.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntegerMatrix;

/// Hard limit on the number of letters in any word produced by substitution.
pub const MAX_WORD_LEN: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorId {
    /// `x_k`, 1-based.
    X(u32),
    /// The distinguished extra generator.
    Y,
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorId::X(k) => write!(f, "x{k}"),
            GeneratorId::Y => f.write_str("y"),
        }
    }
}

impl FromStr for GeneratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "y" {
            return Ok(GeneratorId::Y);
        }
        let index = s
            .strip_prefix('x')
            .and_then(|d| d.parse::<u32>().ok())
            .filter(|&k| k >= 1)
            .ok_or_else(|| Error::UnknownGenerator(s.to_string()))?;
        Ok(GeneratorId::X(index))
    }
}

impl Serialize for GeneratorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The generator set of a free group: `x1..x{x_count}`, plus `y` if present.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Ambient {
    pub x_count: u32,
    pub has_y: bool,
}

impl Ambient {
    /// `F_n = <x1, ..., xn>`
    pub fn free(n: u32) -> Self {
        Ambient {
            x_count: n,
            has_y: false,
        }
    }

    /// `F_{n+1} = <x1, ..., xn, y>`
    pub fn with_y(n: u32) -> Self {
        Ambient {
            x_count: n,
            has_y: true,
        }
    }

    pub fn rank(&self) -> usize {
        self.x_count as usize + usize::from(self.has_y)
    }

    pub fn contains(&self, g: GeneratorId) -> bool {
        match g {
            GeneratorId::X(k) => k >= 1 && k <= self.x_count,
            GeneratorId::Y => self.has_y,
        }
    }

    /// Position of `g` in the canonical order `x1, ..., xn, y`.
    pub fn index_of(&self, g: GeneratorId) -> Option<usize> {
        if !self.contains(g) {
            return None;
        }
        Some(match g {
            GeneratorId::X(k) => k as usize - 1,
            GeneratorId::Y => self.x_count as usize,
        })
    }

    pub fn generators(&self) -> impl Iterator<Item = GeneratorId> {
        let ys = self.has_y.then_some(GeneratorId::Y);
        (1..=self.x_count).map(GeneratorId::X).chain(ys)
    }

    /// Smallest ambient containing every generator in `gens`.
    pub fn spanning<'a>(gens: impl IntoIterator<Item = &'a GeneratorId>) -> Self {
        let mut amb = Ambient::free(0);
        for g in gens {
            match *g {
                GeneratorId::X(k) => amb.x_count = amb.x_count.max(k),
                GeneratorId::Y => amb.has_y = true,
            }
        }
        amb
    }
}

impl fmt::Display for Ambient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.has_y {
            write!(f, "F<x1..x{}, y>", self.x_count)
        } else {
            write!(f, "F<x1..x{}>", self.x_count)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: GeneratorId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GeneratorId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: GeneratorId) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: GeneratorId) -> Self {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    pub fn exponent(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.gen)
        } else {
            write!(f, "{}", self.gen)
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, inverse) = match s.strip_suffix("^-1") {
            Some(base) => (base, true),
            None => (s, false),
        };
        let gen = base
            .parse::<GeneratorId>()
            .map_err(|_| Error::parse(s, "expected x<k>, y, x<k>^-1 or y^-1"))?;
        Ok(Letter { gen, inverse })
    }
}

/// Push `l` onto a reduced stack, cancelling against the top if possible.
#[inline]
fn push_reduced(stack: &mut Vec<Letter>, l: Letter) {
    if stack.last().is_some_and(|top| top.cancels(l)) {
        stack.pop();
    } else {
        stack.push(l);
    }
}

/// A freely reduced word over a declared ambient generator set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    ambient: Ambient,
    letters: Vec<Letter>,
}

/// Freely reduces `letters` in `ambient`.
pub fn reduce(ambient: Ambient, letters: impl IntoIterator<Item = Letter>) -> Result<Word> {
    let mut stack = Vec::new();
    for l in letters {
        if !ambient.contains(l.gen) {
            return Err(Error::UnknownGenerator(l.gen.to_string()));
        }
        push_reduced(&mut stack, l);
    }
    Word::checked(ambient, stack)
}

impl Word {
    fn checked(ambient: Ambient, letters: Vec<Letter>) -> Result<Word> {
        if letters.len() > MAX_WORD_LEN {
            return Err(Error::WordTooLong {
                len: letters.len(),
                limit: MAX_WORD_LEN,
            });
        }
        Ok(Word { ambient, letters })
    }

    pub fn identity(ambient: Ambient) -> Word {
        Word {
            ambient,
            letters: Vec::new(),
        }
    }

    pub fn generator(ambient: Ambient, g: GeneratorId) -> Result<Word> {
        reduce(ambient, [Letter::pos(g)])
    }

    pub fn from_letters(
        ambient: Ambient,
        letters: impl IntoIterator<Item = Letter>,
    ) -> Result<Word> {
        reduce(ambient, letters)
    }

    /// Parses the space-separated text form; `1` is the empty word.
    pub fn parse(text: &str, ambient: Ambient) -> Result<Word> {
        let text = text.trim();
        if text == "1" || text.is_empty() {
            return Ok(Word::identity(ambient));
        }
        let letters = text
            .split_whitespace()
            .map(str::parse::<Letter>)
            .collect::<Result<Vec<_>>>()?;
        reduce(ambient, letters)
    }

    pub fn ambient(&self) -> Ambient {
        self.ambient
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_ambient(&self, other: &Word) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: other.ambient.to_string(),
            });
        }
        Ok(())
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        self.same_ambient(other)?;
        let mut stack = self.letters.clone();
        stack.reserve(other.len());
        for &l in &other.letters {
            push_reduced(&mut stack, l);
        }
        Word::checked(self.ambient, stack)
    }

    pub fn inverse(&self) -> Word {
        Word {
            ambient: self.ambient,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Result<Word> {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut acc = Word::identity(self.ambient);
        for _ in 0..k.unsigned_abs() {
            acc = acc.concat(&base)?;
        }
        Ok(acc)
    }

    /// Splits `self = conjugator^-1 * core * conjugator` with `core`
    /// cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.letters.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.letters[k].cancels(self.letters[n - 1 - k]) {
            k += 1;
        }
        let core = Word {
            ambient: self.ambient,
            letters: self.letters[k..n - k].to_vec(),
        };
        let conjugator = Word {
            ambient: self.ambient,
            letters: self.letters[n - k..].to_vec(),
        };
        (core, conjugator)
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.letters.first(), self.letters.last()) {
            (Some(a), Some(b)) => self.letters.len() == 1 || !a.cancels(*b),
            _ => true,
        }
    }

    pub fn exponent_sum(&self, g: GeneratorId) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.gen == g)
            .map(|l| l.exponent())
            .sum()
    }

    pub fn occurrences(&self, g: GeneratorId) -> usize {
        self.letters.iter().filter(|l| l.gen == g).count()
    }

    pub fn contains_generator(&self, g: GeneratorId) -> bool {
        self.letters.iter().any(|l| l.gen == g)
    }

    /// Deletes every occurrence of `g` and re-reduces.
    pub fn erase(&self, g: GeneratorId) -> Word {
        let mut stack = Vec::with_capacity(self.len());
        for &l in self.letters.iter().filter(|l| l.gen != g) {
            push_reduced(&mut stack, l);
        }
        Word {
            ambient: self.ambient,
            letters: stack,
        }
    }

    /// Reinterprets the word in another ambient that contains all its letters.
    pub fn with_ambient(&self, ambient: Ambient) -> Result<Word> {
        if let Some(l) = self.letters.iter().find(|l| !ambient.contains(l.gen)) {
            return Err(Error::UnknownGenerator(l.gen.to_string()));
        }
        Ok(Word {
            ambient,
            letters: self.letters.clone(),
        })
    }

    /// Cyclic rotation by `k` letters to the left. The result is reduced only
    /// when `self` is cyclically reduced.
    pub fn rotate(&self, k: usize) -> Word {
        let mut letters = self.letters.clone();
        if !letters.is_empty() {
            let k = k % letters.len();
            letters.rotate_left(k);
        }
        Word {
            ambient: self.ambient,
            letters,
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// A map of free groups given by one image word per domain generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endomorphism {
    domain: Ambient,
    codomain: Ambient,
    images: Vec<Word>,
}

impl Endomorphism {
    /// `images[i]` is the image of the i-th domain generator in the order
    /// `x1, ..., xn, y`.
    pub fn new(domain: Ambient, codomain: Ambient, images: Vec<Word>) -> Result<Self> {
        if images.len() != domain.rank() {
            return Err(Error::RankMismatch {
                expected: format!("{} images", domain.rank()),
                found: format!("{} images", images.len()),
            });
        }
        if let Some(w) = images.iter().find(|w| w.ambient != codomain) {
            return Err(Error::AmbientMismatch {
                left: codomain.to_string(),
                right: w.ambient.to_string(),
            });
        }
        Ok(Endomorphism {
            domain,
            codomain,
            images,
        })
    }

    pub fn identity(ambient: Ambient) -> Self {
        let images = ambient
            .generators()
            .map(|g| Word {
                ambient,
                letters: vec![Letter::pos(g)],
            })
            .collect();
        Endomorphism {
            domain: ambient,
            codomain: ambient,
            images,
        }
    }

    /// Identity except at the listed generators.
    pub fn with_images(ambient: Ambient, overrides: &[(GeneratorId, Word)]) -> Result<Self> {
        let mut e = Endomorphism::identity(ambient);
        for (g, w) in overrides {
            let idx = ambient
                .index_of(*g)
                .ok_or_else(|| Error::UnknownGenerator(g.to_string()))?;
            if w.ambient != ambient {
                return Err(Error::AmbientMismatch {
                    left: ambient.to_string(),
                    right: w.ambient.to_string(),
                });
            }
            e.images[idx] = w.clone();
        }
        Ok(e)
    }

    pub fn domain(&self) -> Ambient {
        self.domain
    }

    pub fn codomain(&self) -> Ambient {
        self.codomain
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, g: GeneratorId) -> Option<&Word> {
        self.domain.index_of(g).map(|i| &self.images[i])
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.ambient != self.domain {
            return Err(Error::RankMismatch {
                expected: self.domain.to_string(),
                found: w.ambient.to_string(),
            });
        }
        let mut stack: Vec<Letter> = Vec::new();
        for l in &w.letters {
            let img = &self.images[self.domain.index_of(l.gen).expect("letter in domain")];
            if l.inverse {
                for &m in img.letters.iter().rev() {
                    push_reduced(&mut stack, m.inv());
                }
            } else {
                for &m in &img.letters {
                    push_reduced(&mut stack, m);
                }
            }
            if stack.len() > MAX_WORD_LEN {
                return Err(Error::WordTooLong {
                    len: stack.len(),
                    limit: MAX_WORD_LEN,
                });
            }
        }
        Ok(Word {
            ambient: self.codomain,
            letters: stack,
        })
    }

    /// `self` first, then `next`.
    pub fn compose(&self, next: &Endomorphism) -> Result<Endomorphism> {
        if self.codomain != next.domain {
            return Err(Error::RankMismatch {
                expected: next.domain.to_string(),
                found: self.codomain.to_string(),
            });
        }
        let images = self
            .images
            .iter()
            .map(|w| next.apply(w))
            .collect::<Result<Vec<_>>>()?;
        Ok(Endomorphism {
            domain: self.domain,
            codomain: next.codomain,
            images,
        })
    }

    pub fn is_identity(&self) -> bool {
        self.domain == self.codomain
            && self
                .domain
                .generators()
                .zip(&self.images)
                .all(|(g, w)| w.letters.len() == 1 && w.letters[0] == Letter::pos(g))
    }

    /// Entry `(i, j)` is the exponent sum of codomain generator `i` in the
    /// image of domain generator `j`.
    pub fn abelianized_matrix(&self) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(self.codomain.rank(), self.domain.rank());
        for (j, w) in self.images.iter().enumerate() {
            for l in &w.letters {
                let i = self.codomain.index_of(l.gen).expect("letter in codomain");
                m[(i, j)] += i128::from(l.exponent());
            }
        }
        m
    }

    /// Drops `g` from the domain and erases it from every image. Used for the
    /// projection `<x1..xn, y> -> <x1..xn>` killing `y`.
    pub fn erase_generator(&self, g: GeneratorId) -> Result<Endomorphism> {
        let strip = |a: Ambient| match g {
            GeneratorId::Y if a.has_y => Ok(Ambient { has_y: false, ..a }),
            GeneratorId::Y => Err(Error::MissingY),
            GeneratorId::X(_) => Err(Error::UnknownGenerator(g.to_string())),
        };
        let domain = strip(self.domain)?;
        let codomain = strip(self.codomain)?;
        let images = self
            .domain
            .generators()
            .zip(&self.images)
            .filter(|(h, _)| *h != g)
            .map(|(_, w)| w.erase(g).with_ambient(codomain))
            .collect::<Result<Vec<_>>>()?;
        Endomorphism::new(domain, codomain, images)
    }
}

impl fmt::Display for Endomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, w) in self.domain.generators().zip(&self.images) {
            writeln!(f, "{g} -> {w}")?;
        }
        Ok(())
    }
}

/// An endomorphism together with a machine-verified two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    forward: Endomorphism,
    inverse: Endomorphism,
}

impl Automorphism {
    pub fn new(forward: Endomorphism, inverse: Endomorphism) -> Result<Self> {
        if forward.domain != forward.codomain || inverse.domain != forward.domain {
            return Err(Error::RankMismatch {
                expected: forward.domain.to_string(),
                found: inverse.domain.to_string(),
            });
        }
        for (first, second) in [(&forward, &inverse), (&inverse, &forward)] {
            let round_trip = first.compose(second)?;
            if let Some((g, _)) = forward
                .domain
                .generators()
                .zip(round_trip.images())
                .find(|(g, w)| w.letters() != [Letter::pos(*g)])
            {
                return Err(Error::InvalidInverse {
                    generator: g.to_string(),
                });
            }
        }
        Ok(Automorphism { forward, inverse })
    }

    pub fn identity(ambient: Ambient) -> Self {
        let id = Endomorphism::identity(ambient);
        Automorphism {
            forward: id.clone(),
            inverse: id,
        }
    }

    pub fn forward(&self) -> &Endomorphism {
        &self.forward
    }

    pub fn inverse(&self) -> &Endomorphism {
        &self.inverse
    }

    pub fn inverted(&self) -> Automorphism {
        Automorphism {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
        }
    }
}
