//! The space of bivariate polynomials of bounded total degree, the
//! generator matrix built by evaluating it at the configuration points, and
//! encoding.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec, Matrix};
use crate::geometry::{Configuration, Point};

/// Monomials x^i y^j with i + j ≤ d, ordered by ascending total degree and,
/// within a degree, by descending x-exponent: 1; x, y; x², xy, y²; …
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialBasis {
    d: usize,
    exponents: Vec<(usize, usize)>,
}

impl MonomialBasis {
    pub fn new(d: usize) -> Self {
        let mut exponents = Vec::with_capacity((d + 2) * (d + 1) / 2);
        for total in 0..=d {
            for i in (0..=total).rev() {
                exponents.push((i, total - i));
            }
        }
        MonomialBasis { d, exponents }
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// δ = (d+2)(d+1)/2, the number of monomials.
    pub fn dimension(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[(usize, usize)] {
        &self.exponents
    }

    /// Position of x^i y^j in the basis order, if i + j ≤ d.
    pub fn index_of(&self, i: usize, j: usize) -> Option<usize> {
        let total = i + j;
        if total > self.d {
            return None;
        }
        // Monomials of lower degree, plus the offset within degree `total`.
        Some(total * (total + 1) / 2 + (total - i))
    }

    /// The basis evaluated at a point, as canonical residues.
    pub(crate) fn row_at(&self, p: &Point) -> Vec<u64> {
        let spec = p.spec();
        let xp = power_table(spec, p.x(), self.d);
        let yp = power_table(spec, p.y(), self.d);
        self.exponents.iter().map(|&(i, j)| spec.mul_raw(xp[i], yp[j])).collect()
    }

    /// Evaluates Σ a_ij x^i y^j at a point; consistent with the generator
    /// matrix row by row.
    pub fn evaluate(&self, a: &CoefficientVector, p: &Point) -> Result<FieldElement> {
        if a.len() != self.dimension() {
            return Err(Error::Shape(format!(
                "coefficient vector of length {} against basis dimension {}",
                a.len(),
                self.dimension()
            )));
        }
        let spec = p.spec();
        let row = self.row_at(p);
        let mut acc = 0u64;
        for (value, coeff) in row.iter().zip(a.entries()) {
            if coeff.spec() != spec {
                return Err(Error::SpecMismatch(spec.order(), coeff.spec().order()));
            }
            acc = spec.add_raw(acc, spec.mul_raw(*value, coeff.value()));
        }
        spec.element(acc)
    }
}

fn power_table(spec: FieldSpec, x: FieldElement, d: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(d + 1);
    out.push(1u64);
    for _ in 0..d {
        out.push(spec.mul_raw(*out.last().unwrap(), x.value()));
    }
    out
}

/// A coefficient vector in the monomial basis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoefficientVector(Vec<FieldElement>);

impl CoefficientVector {
    pub fn new(entries: Vec<FieldElement>) -> Result<Self> {
        check_common_spec(&entries)?;
        Ok(CoefficientVector(entries))
    }

    pub fn zero(spec: FieldSpec, len: usize) -> Self {
        CoefficientVector(vec![spec.zero(); len])
    }

    /// A uniformly random vector, for planted-message experiments.
    pub fn random<R: rand::Rng + ?Sized>(spec: FieldSpec, len: usize, rng: &mut R) -> Self {
        let entries = (0..len)
            .map(|_| {
                spec.element(rng.random_range(0..spec.order())).expect("sampled below q")
            })
            .collect();
        CoefficientVector(entries)
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_csv(&self.0, f)
    }
}

/// A vector in F_q^{nm} in the lexicographic point order — a codeword, a
/// received word, or an error pattern.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codeword(Vec<FieldElement>);

impl Codeword {
    pub fn new(entries: Vec<FieldElement>) -> Result<Self> {
        check_common_spec(&entries)?;
        Ok(Codeword(entries))
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Indices of the nonzero coordinates.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, e)| !e.is_zero()).map(|(i, _)| i).collect()
    }

    /// Hamming weight: the number of nonzero coordinates.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|e| !e.is_zero()).count()
    }
}

impl fmt::Display for Codeword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_csv(&self.0, f)
    }
}

fn fmt_csv(entries: &[FieldElement], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    for (i, e) in entries.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{e}")?;
    }
    Ok(())
}

fn check_common_spec(entries: &[FieldElement]) -> Result<()> {
    let first = entries
        .first()
        .ok_or_else(|| Error::Shape("vector must not be empty".into()))?;
    for e in entries {
        if e.spec() != first.spec() {
            return Err(Error::SpecMismatch(first.spec().order(), e.spec().order()));
        }
    }
    Ok(())
}

/// Closed-form parameters of a code instance. The distance lower bound is
/// absent when neither n nor m reaches d + 2, the hypothesis the radius
/// analysis needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeParameters {
    pub length: usize,
    pub dimension: usize,
    pub distance_lower_bound: Option<u64>,
}

/// An evaluation code: the configuration, the degree bound, and the
/// nm × δ generator matrix E with rows in lexicographic point order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeInstance {
    config: Configuration,
    d: usize,
    basis: MonomialBasis,
    matrix: Matrix,
}

impl CodeInstance {
    /// Evaluates the monomial basis at every configuration point. The row
    /// for point (i, j) is row i·m + j. Verifies rank(E) = δ, which valid
    /// configurations guarantee; a deficiency means the configuration is
    /// corrupt.
    pub fn build(config: Configuration, d: usize) -> Result<Self> {
        let (n, m) = (config.n(), config.m());
        if d < 1 || d >= n.min(m) {
            return Err(Error::Parameter(format!(
                "degree d = {d} must satisfy 1 ≤ d < min(n, m) = {}",
                n.min(m)
            )));
        }
        let basis = MonomialBasis::new(d);
        let rows: Vec<Vec<u64>> = config
            .points()
            .iter()
            .flatten()
            .map(|p| basis.row_at(p))
            .collect();
        let matrix = Matrix::from_rows(config.spec(), &rows)?;
        let rank = matrix.rank();
        if rank != basis.dimension() {
            return Err(Error::Internal(format!(
                "generator matrix has rank {rank}, expected {}: configuration invariants are broken",
                basis.dimension()
            )));
        }
        Ok(CodeInstance { config, d, basis, matrix })
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn spec(&self) -> FieldSpec {
        self.config.spec()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn basis(&self) -> &MonomialBasis {
        &self.basis
    }

    /// The generator matrix E.
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Code length nm.
    pub fn length(&self) -> usize {
        self.config.n() * self.config.m()
    }

    /// Code dimension δ.
    pub fn dimension(&self) -> usize {
        self.basis.dimension()
    }

    /// E·a, the codeword of a coefficient vector.
    pub fn encode(&self, a: &CoefficientVector) -> Result<Codeword> {
        if a.len() != self.dimension() {
            return Err(Error::Shape(format!(
                "coefficient vector of length {} for a code of dimension {}",
                a.len(),
                self.dimension()
            )));
        }
        Codeword::new(self.matrix.mul_vec(a.entries())?)
    }

    /// Length, dimension, and the tableau-derived distance lower bound.
    pub fn parameters(&self) -> CodeParameters {
        let bound = crate::bounds::error_radius(self.config.n(), self.config.m(), self.d)
            .ok()
            .map(|r| r.radius);
        CodeParameters {
            length: self.length(),
            dimension: self.dimension(),
            distance_lower_bound: bound,
        }
    }
}
