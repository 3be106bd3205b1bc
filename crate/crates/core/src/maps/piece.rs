//! The closed catalog of per-atom maps `ℝⁿ → ℝⁿ`.

use num::Zero;

use crate::error::{L0Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;

/// Exponents of a coordinatewise power map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exponents {
    Uniform(u32),
    PerCoord(Vec<u32>),
}

impl Exponents {
    fn get(&self, i: usize) -> u32 {
        match self {
            Exponents::Uniform(e) => *e,
            Exponents::PerCoord(es) => es[i],
        }
    }

    fn all(&self) -> Vec<u32> {
        match self {
            Exponents::Uniform(e) => vec![*e],
            Exponents::PerCoord(es) => es.clone(),
        }
    }
}

/// One per-atom map. `Compose` applies its parts left to right.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Piece {
    Identity,
    Affine {
        matrix: Matrix,
        offset: Vec<Rational>,
    },
    Translate(Vec<Rational>),
    /// `t ↦ (t₁^{e₁}, …, tₙ^{eₙ})` with odd exponents.
    Power(Exponents),
    Compose(Vec<Piece>),
}

/// A pair of distinct points with the same image, or a proof that the
/// piece collapses a direction when no rational collision is at hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PieceCollision {
    Points(Vec<Rational>, Vec<Rational>),
    /// Part `part` (index into a composition) is an affine map whose linear
    /// part kills `kernel`.
    SingularPart {
        part: usize,
        kernel: Vec<Rational>,
    },
}

fn pow(v: &Rational, e: u32) -> Rational {
    num::pow(v.clone(), e as usize)
}

impl Piece {
    pub fn cube() -> Self {
        Piece::Power(Exponents::Uniform(3))
    }

    /// Checks shapes against `dim` and that power exponents are odd.
    pub fn validate(&self, dim: usize) -> Result<()> {
        match self {
            Piece::Identity => Ok(()),
            Piece::Affine { matrix, offset } => {
                if matrix.rows() != dim || matrix.cols() != dim {
                    return Err(L0Error::DimMismatch {
                        expected: dim,
                        found: matrix.rows().max(matrix.cols()),
                    });
                }
                if offset.len() != dim {
                    return Err(L0Error::DimMismatch {
                        expected: dim,
                        found: offset.len(),
                    });
                }
                Ok(())
            }
            Piece::Translate(t) => {
                if t.len() != dim {
                    return Err(L0Error::DimMismatch {
                        expected: dim,
                        found: t.len(),
                    });
                }
                Ok(())
            }
            Piece::Power(exps) => {
                if let Exponents::PerCoord(es) = exps {
                    if es.len() != dim {
                        return Err(L0Error::DimMismatch {
                            expected: dim,
                            found: es.len(),
                        });
                    }
                }
                match exps.all().into_iter().find(|e| e % 2 == 0) {
                    Some(e) => Err(L0Error::InvalidPiece(format!(
                        "power exponents must be odd, got {e}"
                    ))),
                    None => Ok(()),
                }
            }
            Piece::Compose(parts) => parts.iter().try_for_each(|p| p.validate(dim)),
        }
    }

    /// The dimension this piece pins down, if any.
    pub fn implied_dim(&self) -> Option<usize> {
        match self {
            Piece::Identity | Piece::Power(Exponents::Uniform(_)) => None,
            Piece::Affine { offset, .. } => Some(offset.len()),
            Piece::Translate(t) => Some(t.len()),
            Piece::Power(Exponents::PerCoord(es)) => Some(es.len()),
            Piece::Compose(parts) => parts.iter().find_map(Piece::implied_dim),
        }
    }

    pub fn apply(&self, p: &[Rational]) -> Vec<Rational> {
        match self {
            Piece::Identity => p.to_vec(),
            Piece::Affine { matrix, offset } => matrix
                .mul_vec(p)
                .into_iter()
                .zip(offset)
                .map(|(a, b)| a + b)
                .collect(),
            Piece::Translate(t) => p.iter().zip(t).map(|(a, b)| a + b).collect(),
            Piece::Power(exps) => p
                .iter()
                .enumerate()
                .map(|(i, v)| pow(v, exps.get(i)))
                .collect(),
            Piece::Compose(parts) => parts.iter().fold(p.to_vec(), |acc, part| part.apply(&acc)),
        }
    }

    /// `(M, c)` with `apply(t) = M t + c`, when the piece is affine.
    pub fn as_affine(&self, dim: usize) -> Option<(Matrix, Vec<Rational>)> {
        match self {
            Piece::Identity => Some((Matrix::identity(dim), vec![Rational::zero(); dim])),
            Piece::Affine { matrix, offset } => Some((matrix.clone(), offset.clone())),
            Piece::Translate(t) => Some((Matrix::identity(dim), t.clone())),
            Piece::Power(exps) => (0..dim)
                .all(|i| exps.get(i) == 1)
                .then(|| (Matrix::identity(dim), vec![Rational::zero(); dim])),
            Piece::Compose(parts) => {
                let mut m = Matrix::identity(dim);
                let mut c = vec![Rational::zero(); dim];
                for part in parts {
                    let (pm, pc) = part.as_affine(dim)?;
                    c = pm
                        .mul_vec(&c)
                        .into_iter()
                        .zip(&pc)
                        .map(|(a, b)| a + b)
                        .collect();
                    m = pm.mul(&m);
                }
                Some((m, c))
            }
        }
    }

    /// Exact over `ℝⁿ`: odd powers and translations are bijections, an affine
    /// piece is injective iff its matrix is invertible, and a composition is
    /// injective iff every part is (all injective parts are onto).
    pub fn is_injective(&self) -> bool {
        match self {
            Piece::Identity | Piece::Translate(_) | Piece::Power(_) => true,
            Piece::Affine { matrix, .. } => !matrix.determinant().is_zero(),
            Piece::Compose(parts) => parts.iter().all(Piece::is_injective),
        }
    }

    /// Evidence that the piece is not injective.
    pub fn collision(&self, dim: usize) -> Option<PieceCollision> {
        match self {
            Piece::Affine { matrix, .. } => matrix
                .kernel_vector()
                .map(|k| PieceCollision::Points(vec![Rational::zero(); dim], k)),
            Piece::Compose(parts) => {
                let bad = parts.iter().position(|p| !p.is_injective())?;
                let PieceCollision::Points(p, q) = parts[bad].collision(dim)? else {
                    return None;
                };
                // pull the collision back through the (bijective) prefix when
                // the prefix is affine; otherwise report the singular part
                let prefix = Piece::Compose(parts[..bad].to_vec());
                match prefix.as_affine(dim) {
                    Some((m, c)) => {
                        let inv = m.inverse()?;
                        let back = |v: &[Rational]| {
                            let shifted: Vec<Rational> =
                                v.iter().zip(&c).map(|(a, b)| a - b).collect();
                            inv.mul_vec(&shifted)
                        };
                        Some(PieceCollision::Points(back(&p), back(&q)))
                    }
                    None => {
                        let kernel = q.iter().zip(&p).map(|(a, b)| a - b).collect();
                        Some(PieceCollision::SingularPart { part: bad, kernel })
                    }
                }
            }
            _ => None,
        }
    }
}
