//! Self-maps of `(L⁰)ⁿ` and executable predicates on them.
//!
//! A [`MapSpec`] is one of four representations. The structured ones
//! (affine, semilinear, per-atom) admit exact answers to most questions; a
//! black box only admits probe-based evidence, and reports say so.

mod lines;
mod piece;
mod predicates;
mod semilinear;

use std::fmt;
use std::sync::Arc;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{L0Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::space::ProbSpace;
use crate::vector::Vector;

pub(crate) use lines::on_image_line;
pub use lines::{check_line_preservation, LinePreservationReport, LineWitness, OntoStatus};
pub use piece::{Exponents, Piece, PieceCollision};
pub use predicates::{
    factor_per_atom, injectivity, is_local, is_local_with, is_stable, stability_witness,
    AtomFactors, InjectivityReport, InjectivityWitness, LocalityReport, LocalityWitness,
    StabilityWitness, Strength,
};
pub use semilinear::{check_semilinear, make_swap_map, SemilinearFailure, SemilinearReport};

/// `x ↦ A(ω) x(ω) + b(ω)` atom by atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineMap {
    matrices: Vec<Matrix>,
    offset: Vector,
}

impl AffineMap {
    pub fn new(matrices: Vec<Matrix>, offset: Vector) -> Result<Self> {
        let n = offset.dim();
        if matrices.len() != offset.space().len() {
            return Err(L0Error::Malformed(format!(
                "{} matrices for {} atoms",
                matrices.len(),
                offset.space().len()
            )));
        }
        if let Some(m) = matrices.iter().find(|m| m.rows() != n || m.cols() != n) {
            return Err(L0Error::DimMismatch {
                expected: n,
                found: if m.rows() != n { m.rows() } else { m.cols() },
            });
        }
        Ok(Self { matrices, offset })
    }

    pub fn identity(space: &ProbSpace, dim: usize) -> Self {
        Self {
            matrices: vec![Matrix::identity(dim); space.len()],
            offset: Vector::zero(space, dim),
        }
    }

    pub fn translation(offset: Vector) -> Self {
        Self {
            matrices: vec![Matrix::identity(offset.dim()); offset.space().len()],
            offset,
        }
    }

    pub fn linear(space: &ProbSpace, matrices: Vec<Matrix>) -> Result<Self> {
        let dim = matrices.first().map_or(0, Matrix::rows);
        if dim == 0 {
            return Err(L0Error::ZeroDimension);
        }
        Self::new(matrices, Vector::zero(space, dim))
    }

    pub fn space(&self) -> &ProbSpace {
        self.offset.space()
    }

    pub fn dim(&self) -> usize {
        self.offset.dim()
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    pub fn matrix(&self, atom: usize) -> &Matrix {
        &self.matrices[atom]
    }

    pub fn offset(&self) -> &Vector {
        &self.offset
    }

    pub fn apply_at(&self, atom: usize, p: &[Rational]) -> Vec<Rational> {
        self.matrices[atom]
            .mul_vec(p)
            .into_iter()
            .zip(self.offset.point(atom))
            .map(|(a, b)| a + b)
            .collect()
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        x.map_points(self.dim(), |atom, p| self.apply_at(atom, p))
    }

    pub fn determinants(&self) -> Vec<Rational> {
        self.matrices.iter().map(Matrix::determinant).collect()
    }

    /// The first atom whose matrix is singular.
    pub fn singular_atom(&self) -> Option<usize> {
        self.matrices.iter().position(|m| m.determinant().is_zero())
    }
}

/// A measure-preserving permutation of atoms, `images[ω] = σ(ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomPermutation {
    space: ProbSpace,
    images: Vec<usize>,
}

impl AtomPermutation {
    pub fn new(space: &ProbSpace, images: Vec<usize>) -> Result<Self> {
        if images.len() != space.len() {
            return Err(L0Error::InvalidPermutation(format!(
                "{} images for {} atoms",
                images.len(),
                space.len()
            )));
        }
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(L0Error::InvalidPermutation(format!(
                    "{images:?} is not a bijection"
                )));
            }
        }
        for (from, &to) in images.iter().enumerate() {
            if space.mass(from) != space.mass(to) {
                return Err(L0Error::NotMeasurePreserving {
                    from: space.id(from).to_string(),
                    to: space.id(to).to_string(),
                    from_mass: space.mass(from).to_string(),
                    to_mass: space.mass(to).to_string(),
                });
            }
        }
        Ok(Self {
            space: space.clone(),
            images,
        })
    }

    pub fn identity(space: &ProbSpace) -> Self {
        Self {
            space: space.clone(),
            images: (0..space.len()).collect(),
        }
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, atom: usize) -> usize {
        self.images[atom]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }
}

/// `(Tx)(ω) = A(ω) x(σ(ω)) + b(ω)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilinearMap {
    sigma: AtomPermutation,
    affine: AffineMap,
}

impl SemilinearMap {
    pub fn new(sigma: AtomPermutation, affine: AffineMap) -> Result<Self> {
        sigma.space().ensure_same(affine.space())?;
        Ok(Self { sigma, affine })
    }

    pub fn sigma(&self) -> &AtomPermutation {
        &self.sigma
    }

    pub fn affine(&self) -> &AffineMap {
        &self.affine
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        self.affine.eval(&x.pull_back(self.sigma.images()))
    }
}

/// `(Tx)(ω) = f_ω(x(ω))` with each `f_ω` drawn from the [`Piece`] catalog.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerAtomMap {
    space: ProbSpace,
    dim: usize,
    pieces: Vec<Piece>,
}

impl PerAtomMap {
    pub fn new(space: &ProbSpace, dim: usize, pieces: Vec<Piece>) -> Result<Self> {
        if dim == 0 {
            return Err(L0Error::ZeroDimension);
        }
        if pieces.len() != space.len() {
            return Err(L0Error::Malformed(format!(
                "{} pieces for {} atoms",
                pieces.len(),
                space.len()
            )));
        }
        for p in &pieces {
            p.validate(dim)?;
        }
        Ok(Self {
            space: space.clone(),
            dim,
            pieces,
        })
    }

    /// The same piece on every atom.
    pub fn uniform(space: &ProbSpace, dim: usize, piece: Piece) -> Result<Self> {
        Self::new(space, dim, vec![piece; space.len()])
    }

    pub fn space(&self) -> &ProbSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn eval(&self, x: &Vector) -> Vector {
        x.map_points(self.dim, |atom, p| self.pieces[atom].apply(p))
    }

    /// The equivalent affine map, when every piece is affine.
    pub fn as_affine(&self) -> Option<AffineMap> {
        let mut matrices = Vec::with_capacity(self.pieces.len());
        let mut offsets = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let (m, c) = p.as_affine(self.dim)?;
            matrices.push(m);
            offsets.push(c);
        }
        let offset = Vector::from_points(&self.space, self.dim, offsets).ok()?;
        AffineMap::new(matrices, offset).ok()
    }
}

pub type Oracle = Arc<dyn Fn(&Vector) -> Vector + Send + Sync>;

/// An evaluation oracle. Oracles must be pure.
#[derive(Clone)]
pub struct BlackBoxMap {
    space: ProbSpace,
    dim: usize,
    label: String,
    oracle: Oracle,
}

impl fmt::Debug for BlackBoxMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BlackBoxMap")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .finish_non_exhaustive()
    }
}

impl BlackBoxMap {
    pub fn new(
        space: &ProbSpace,
        dim: usize,
        label: impl Into<String>,
        oracle: impl Fn(&Vector) -> Vector + Send + Sync + 'static,
    ) -> Self {
        Self {
            space: space.clone(),
            dim,
            label: label.into(),
            oracle: Arc::new(oracle),
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    Affine,
    Semilinear,
    PerAtom,
    BlackBox,
}

#[derive(Debug, Clone)]
pub enum MapSpec {
    Affine(AffineMap),
    Semilinear(SemilinearMap),
    PerAtom(PerAtomMap),
    BlackBox(BlackBoxMap),
}

impl From<AffineMap> for MapSpec {
    fn from(m: AffineMap) -> Self {
        MapSpec::Affine(m)
    }
}

impl From<SemilinearMap> for MapSpec {
    fn from(m: SemilinearMap) -> Self {
        MapSpec::Semilinear(m)
    }
}

impl From<PerAtomMap> for MapSpec {
    fn from(m: PerAtomMap) -> Self {
        MapSpec::PerAtom(m)
    }
}

impl From<BlackBoxMap> for MapSpec {
    fn from(m: BlackBoxMap) -> Self {
        MapSpec::BlackBox(m)
    }
}

impl MapSpec {
    pub fn kind(&self) -> MapKind {
        match self {
            MapSpec::Affine(_) => MapKind::Affine,
            MapSpec::Semilinear(_) => MapKind::Semilinear,
            MapSpec::PerAtom(_) => MapKind::PerAtom,
            MapSpec::BlackBox(_) => MapKind::BlackBox,
        }
    }

    pub fn space(&self) -> &ProbSpace {
        match self {
            MapSpec::Affine(m) => m.space(),
            MapSpec::Semilinear(m) => m.affine.space(),
            MapSpec::PerAtom(m) => &m.space,
            MapSpec::BlackBox(m) => &m.space,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            MapSpec::Affine(m) => m.dim(),
            MapSpec::Semilinear(m) => m.affine.dim(),
            MapSpec::PerAtom(m) => m.dim,
            MapSpec::BlackBox(m) => m.dim,
        }
    }

    pub fn is_structured(&self) -> bool {
        !matches!(self, MapSpec::BlackBox(_))
    }

    /// `T(x)`, checking that `x` and the result fit the map.
    pub fn eval(&self, x: &Vector) -> Result<Vector> {
        self.space().ensure_same(x.space())?;
        if x.dim() != self.dim() {
            return Err(L0Error::DimMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let y = self.apply(x);
        if y.space() != self.space() || y.dim() != self.dim() {
            return Err(L0Error::Malformed(
                "oracle returned a vector of the wrong shape".into(),
            ));
        }
        Ok(y)
    }

    /// `T(x)` without shape checks; callers guarantee compatibility.
    pub fn apply(&self, x: &Vector) -> Vector {
        match self {
            MapSpec::Affine(m) => m.eval(x),
            MapSpec::Semilinear(m) => m.eval(x),
            MapSpec::PerAtom(m) => m.eval(x),
            MapSpec::BlackBox(m) => (m.oracle)(x),
        }
    }

    /// The `L⁰`-affine form of a structured map, when it has one. A
    /// semilinear map is affine iff it is local, i.e. every atom it moves
    /// carries a zero matrix.
    pub fn as_affine(&self) -> Option<AffineMap> {
        match self {
            MapSpec::Affine(m) => Some(m.clone()),
            MapSpec::Semilinear(m) => {
                let sigma = &m.sigma;
                let moved_nonzero = (0..sigma.images.len())
                    .any(|a| sigma.apply(a) != a && !m.affine.matrix(a).is_zero());
                (!moved_nonzero).then(|| AffineMap {
                    matrices: m.affine.matrices.clone(),
                    offset: m.affine.offset.clone(),
                })
            }
            MapSpec::PerAtom(m) => m.as_affine(),
            MapSpec::BlackBox(_) => None,
        }
    }

    /// Hides the representation behind an oracle that evaluates `self`.
    pub fn to_black_box(&self) -> MapSpec {
        let inner = self.clone();
        let label = format!("{:?}", self.kind());
        MapSpec::BlackBox(BlackBoxMap::new(
            self.space(),
            self.dim(),
            label,
            move |x| inner.apply(x),
        ))
    }

    /// `S = T − T(θ)`, as an oracle unless the shift keeps a structured form.
    pub fn centered(&self) -> MapSpec {
        let b = self.apply(&Vector::zero(self.space(), self.dim()));
        match self {
            MapSpec::Affine(m) => MapSpec::Affine(AffineMap {
                matrices: m.matrices.clone(),
                offset: Vector::zero(self.space(), self.dim()),
            }),
            MapSpec::Semilinear(m) => MapSpec::Semilinear(SemilinearMap {
                sigma: m.sigma.clone(),
                affine: AffineMap {
                    matrices: m.affine.matrices.clone(),
                    offset: Vector::zero(self.space(), self.dim()),
                },
            }),
            _ => {
                let inner = self.clone();
                MapSpec::BlackBox(BlackBoxMap::new(
                    self.space(),
                    self.dim(),
                    "centered",
                    move |x| &inner.apply(x) - &b,
                ))
            }
        }
    }
}
