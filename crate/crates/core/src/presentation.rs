//! Surface groups with boundary: the relator word, its right-trivialized
//! differential and the coboundary map.
//!
//! Tangent vectors are stored right-trivialized: the component `H_s` at a generator
//! `s` is the velocity of `t -> exp(t H_s) s`. The left-trivialized form (`s H'_s`)
//! is `H'_s = Ad(s^{-1}) H_s`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::lie::{adjoint, adjoint_matrix, algebra_basis, random_element, AlgebraElement, GroupElement, GroupSpec};
use crate::scalar::{CMatrix, RMatrix, RVector, Scalar};

/// Genus `g >= 1` surface with `m >= 0` boundary circles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SurfacePresentation {
    pub genus: usize,
    pub boundary_count: usize,
}

/// A generator of the surface group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    A(usize),
    B(usize),
    C(usize),
}

/// One letter of the relator word: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl SurfacePresentation {
    pub fn new(genus: usize, boundary_count: usize) -> Result<Self> {
        if genus == 0 {
            return Err(Error::Precondition("genus must be at least 1".into()));
        }
        Ok(Self { genus, boundary_count })
    }

    pub fn closed(genus: usize) -> Result<Self> {
        Self::new(genus, 0)
    }

    /// Closed surfaces of genus one carry no irreducible SU(2) points on the smooth stratum.
    pub fn warning(&self) -> Option<&'static str> {
        (self.boundary_count == 0 && self.genus < 2)
            .then_some("closed genus-one surface: no irreducible points in the smooth stratum")
    }

    pub fn generator_count(&self) -> usize {
        2 * self.genus + self.boundary_count
    }

    /// Position in the flat order `a_1, b_1, ..., a_g, b_g, c_1, ..., c_m`.
    pub fn flat_index(&self, gen: Generator) -> usize {
        match gen {
            Generator::A(i) => 2 * i,
            Generator::B(i) => 2 * i + 1,
            Generator::C(k) => 2 * self.genus + k,
        }
    }

    pub fn generator(&self, flat: usize) -> Generator {
        if flat < 2 * self.genus {
            if flat % 2 == 0 {
                Generator::A(flat / 2)
            } else {
                Generator::B(flat / 2)
            }
        } else {
            Generator::C(flat - 2 * self.genus)
        }
    }

    /// The relator `c_m ... c_1 b_g^{-1} a_g^{-1} b_g a_g ... b_1^{-1} a_1^{-1} b_1 a_1`
    /// as letters in application order (rightmost factor first).
    pub fn letters(&self) -> Vec<Letter> {
        let mut out = Vec::with_capacity(4 * self.genus + self.boundary_count);
        for i in 0..self.genus {
            let a = self.flat_index(Generator::A(i));
            let b = self.flat_index(Generator::B(i));
            out.push(Letter { generator: a, inverse: false });
            out.push(Letter { generator: b, inverse: false });
            out.push(Letter { generator: a, inverse: true });
            out.push(Letter { generator: b, inverse: true });
        }
        for k in 0..self.boundary_count {
            out.push(Letter { generator: self.flat_index(Generator::C(k)), inverse: false });
        }
        out
    }
}

/// Images `(a_1, b_1, ..., a_g, b_g, c_1, ..., c_m)` of the generators.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorTuple<T: Scalar> {
    spec: GroupSpec,
    presentation: SurfacePresentation,
    elements: Vec<GroupElement<T>>,
}

impl<T: Scalar> GeneratorTuple<T> {
    pub fn new(
        spec: GroupSpec,
        a: Vec<GroupElement<T>>,
        b: Vec<GroupElement<T>>,
        c: Vec<GroupElement<T>>,
    ) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
        }
        let presentation = SurfacePresentation::new(a.len(), c.len())?;
        let mut elements = Vec::with_capacity(presentation.generator_count());
        for (x, y) in a.into_iter().zip(b) {
            elements.push(x);
            elements.push(y);
        }
        elements.extend(c);
        Self::from_flat(spec, presentation, elements)
    }

    pub fn from_flat(spec: GroupSpec, presentation: SurfacePresentation, elements: Vec<GroupElement<T>>) -> Result<Self> {
        if elements.len() != presentation.generator_count() {
            return Err(Error::DimensionMismatch { expected: presentation.generator_count(), found: elements.len() });
        }
        if let Some(bad) = elements.iter().find(|g| g.spec() != spec) {
            return Err(Error::InvalidSpec(format!("tuple mixes {spec} and {}", bad.spec())));
        }
        Ok(Self { spec, presentation, elements })
    }

    pub fn identity(spec: GroupSpec, presentation: SurfacePresentation) -> Self {
        let elements = vec![GroupElement::identity(spec); presentation.generator_count()];
        Self { spec, presentation, elements }
    }

    /// Independent [`random_element`] draws for every generator.
    pub fn random<R: Rng + ?Sized>(spec: GroupSpec, presentation: SurfacePresentation, rng: &mut R) -> Self {
        let elements = (0..presentation.generator_count()).map(|_| random_element(spec, rng)).collect();
        Self { spec, presentation, elements }
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn presentation(&self) -> SurfacePresentation {
        self.presentation
    }

    pub fn genus(&self) -> usize {
        self.presentation.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.presentation.boundary_count
    }

    /// All generator images in flat order.
    pub fn elements(&self) -> &[GroupElement<T>] {
        &self.elements
    }

    pub fn get(&self, gen: Generator) -> &GroupElement<T> {
        &self.elements[self.presentation.flat_index(gen)]
    }

    pub fn a(&self, i: usize) -> &GroupElement<T> {
        self.get(Generator::A(i))
    }

    pub fn b(&self, i: usize) -> &GroupElement<T> {
        self.get(Generator::B(i))
    }

    pub fn c(&self, k: usize) -> &GroupElement<T> {
        self.get(Generator::C(k))
    }

    pub fn boundary(&self) -> &[GroupElement<T>] {
        &self.elements[2 * self.presentation.genus..]
    }

    pub fn with_elements(&self, elements: Vec<GroupElement<T>>) -> Self {
        assert_eq!(elements.len(), self.elements.len());
        Self { spec: self.spec, presentation: self.presentation, elements }
    }

    /// Every generator mapped to `A^{-1} s A`.
    pub fn conjugate(&self, a: &GroupElement<T>) -> Self {
        self.with_elements(self.elements.iter().map(|s| s.conjugate_by(a)).collect())
    }

    pub fn reproject(&self) -> Self {
        self.with_elements(self.elements.iter().map(GroupElement::reproject).collect())
    }

    fn letter_value(&self, letter: Letter) -> GroupElement<T> {
        let g = &self.elements[letter.generator];
        if letter.inverse {
            g.inverse()
        } else {
            g.clone()
        }
    }
}

/// Per-generator Lie algebra elements, right-trivialized, in flat generator order.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentVector<T: Scalar> {
    components: Vec<AlgebraElement<T>>,
}

impl<T: Scalar> TangentVector<T> {
    pub fn new(components: Vec<AlgebraElement<T>>) -> Self {
        Self { components }
    }

    pub fn zero(spec: GroupSpec, len: usize) -> Self {
        Self { components: vec![AlgebraElement::zero(spec); len] }
    }

    pub fn components(&self) -> &[AlgebraElement<T>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(x, y)| x + y).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self { components: self.components.iter().zip(&other.components).map(|(x, y)| x - y).collect() }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { components: self.components.iter().map(|x| x.scale(s)).collect() }
    }

    /// Sum of component-wise `Re tr(X^* Y)`.
    pub fn dot(&self, other: &Self) -> T {
        self.components.iter().zip(&other.components).fold(T::zero(), |acc, (x, y)| acc + x.dot(y))
    }

    pub fn norm(&self) -> T {
        self.dot(self).sqrt()
    }

    /// Concatenated real coordinates of the components.
    pub fn coords(&self) -> RVector<T> {
        let Some(first) = self.components.first() else {
            return RVector::zeros(0);
        };
        let spec = first.spec();
        let basis = algebra_basis::<T>(spec);
        let d = basis.len();
        let mut out = RVector::zeros(d * self.components.len());
        for (i, x) in self.components.iter().enumerate() {
            out.rows_mut(i * d, d).copy_from(&x.coords_in(&basis));
        }
        out
    }

    pub fn from_coords(spec: GroupSpec, coords: &[T]) -> Self {
        let basis = algebra_basis::<T>(spec);
        let d = basis.len();
        assert_eq!(coords.len() % d, 0);
        Self {
            components: coords.chunks(d).map(|c| AlgebraElement::from_coords_in(spec, &basis, c)).collect(),
        }
    }

    /// Components mapped by `Ad(A^{-1})`: the tangent vector transported along the
    /// conjugation `s -> A^{-1} s A`.
    pub fn conjugate(&self, a: &GroupElement<T>) -> Self {
        let ainv = a.inverse();
        Self { components: self.components.iter().map(|x| adjoint(&ainv, x)).collect() }
    }
}

/// Right-trivialized to left-trivialized: `H -> Ad(s^{-1}) H` per generator.
pub fn to_left_trivialized<T: Scalar>(t: &GeneratorTuple<T>, h: &TangentVector<T>) -> TangentVector<T> {
    TangentVector::new(
        t.elements().iter().zip(h.components()).map(|(s, x)| adjoint(&s.inverse(), x)).collect(),
    )
}

/// Left-trivialized to right-trivialized: `H -> Ad(s) H` per generator.
pub fn to_right_trivialized<T: Scalar>(t: &GeneratorTuple<T>, h: &TangentVector<T>) -> TangentVector<T> {
    TangentVector::new(t.elements().iter().zip(h.components()).map(|(s, x)| adjoint(s, x)).collect())
}

/// `c_m ... c_1 b_g^{-1} a_g^{-1} b_g a_g ... b_1^{-1} a_1^{-1} b_1 a_1`.
pub fn evaluate_relator<T: Scalar>(t: &GeneratorTuple<T>) -> GroupElement<T> {
    let mut acc: CMatrix<T> = CMatrix::identity(t.spec().rank, t.spec().rank);
    for letter in t.presentation().letters() {
        acc = t.letter_value(letter).matrix() * acc;
    }
    GroupElement::from_matrix_unchecked(t.spec(), acc)
}

/// One term `sign * Ad(transport)` of the differential, acting on the component of
/// `generator`.
#[derive(Clone, Debug)]
struct DifferentialTerm<T: Scalar> {
    generator: usize,
    transport: GroupElement<T>,
    negate: bool,
}

/// Right-trivialized differential of the relator map at a tuple:
/// `H -> d/dt|_0 Pi(exp(t H_s) s) Pi^{-1}`.
///
/// For letters `L_N ... L_1` with suffix products `S_i = L_N ... L_{i+1}`, a letter
/// `s` contributes `Ad(S_i) H_s` and a letter `s^{-1}` contributes
/// `-Ad(S_i s^{-1}) H_s = -Ad(S_{i-1}) H_s`.
#[derive(Clone, Debug)]
pub struct RelatorDifferential<T: Scalar> {
    spec: GroupSpec,
    generators: usize,
    terms: Vec<DifferentialTerm<T>>,
}

impl<T: Scalar> RelatorDifferential<T> {
    pub fn apply(&self, h: &TangentVector<T>) -> AlgebraElement<T> {
        let mut acc = AlgebraElement::zero(self.spec);
        for term in &self.terms {
            let v = adjoint(&term.transport, &h.components()[term.generator]);
            acc = if term.negate { &acc - &v } else { &acc + &v };
        }
        acc
    }

    /// Real matrix `d x (n d)` in algebra-basis coordinates.
    pub fn matrix(&self) -> RMatrix<T> {
        let d = self.spec.real_dim();
        let mut out = RMatrix::zeros(d, d * self.generators);
        for term in &self.terms {
            let mut block = out.columns_mut(term.generator * d, d);
            let ad = adjoint_matrix(&term.transport);
            if term.negate {
                block -= ad;
            } else {
                block += ad;
            }
        }
        out
    }
}

pub fn relator_differential<T: Scalar>(t: &GeneratorTuple<T>) -> RelatorDifferential<T> {
    let letters = t.presentation().letters();
    let spec = t.spec();
    let mut terms = Vec::with_capacity(letters.len());
    // suffix = L_N ... L_{i+1}, walked from the left end of the word.
    let mut suffix = GroupElement::identity(spec);
    for letter in letters.iter().rev() {
        let value = t.letter_value(*letter);
        let with_letter = &suffix * &value;
        if letter.inverse {
            terms.push(DifferentialTerm { generator: letter.generator, transport: with_letter.clone(), negate: true });
        } else {
            terms.push(DifferentialTerm { generator: letter.generator, transport: suffix.clone(), negate: false });
        }
        suffix = with_letter;
    }
    RelatorDifferential { spec, generators: t.presentation().generator_count(), terms }
}

/// Derivative of the conjugation orbit: component `X - Ad(s) X` at generator `s`.
pub fn coboundary<T: Scalar>(t: &GeneratorTuple<T>, x: &AlgebraElement<T>) -> TangentVector<T> {
    TangentVector::new(t.elements().iter().map(|s| x - &adjoint(s, x)).collect())
}

/// Matrix `(n d) x d` of [`coboundary`] in real coordinates.
pub fn coboundary_matrix<T: Scalar>(t: &GeneratorTuple<T>) -> RMatrix<T> {
    let d = t.spec().real_dim();
    let n = t.presentation().generator_count();
    let mut out = RMatrix::zeros(n * d, d);
    for (i, s) in t.elements().iter().enumerate() {
        let block = RMatrix::identity(d, d) - adjoint_matrix(s);
        out.view_mut((i * d, 0), (d, d)).copy_from(&block);
    }
    out
}
