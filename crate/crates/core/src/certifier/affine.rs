use rand::Rng;

use super::{AffineCertificate, Certification, FailureWitness, HypothesisRecord, Provenance};
use crate::error::{L0Error, Result};
use crate::geometry::{has_full_support, line_membership};
use crate::linalg::Matrix;
use crate::maps::{
    check_line_preservation, injectivity, is_local_with, AffineMap, MapSpec, OntoStatus, Strength,
};
use crate::probes::{rng_for, staircase_vector, ProbeBudget, ProbeSet};
use crate::scalar::Scalar;
use crate::space::Event;
use crate::vector::Vector;

/// Stream used for certification probes; line trials use stream 0.
const PROBE_STREAM: u64 = 1;

/// The probe set plus the vectors built from it for verification: scalar
/// multiples of a few base vectors and indicator mixes of probe pairs.
fn verification_probes(map: &MapSpec, budget: &ProbeBudget, seed: u64) -> (ProbeSet, Vec<Vector>) {
    let space = map.space();
    let dim = map.dim();
    let mut rng = rng_for(seed, PROBE_STREAM);
    let probes = ProbeSet::generate(space, dim, budget, &mut rng);
    let mut out = probes.vectors.clone();
    let bases = [
        staircase_vector(space, dim, 0),
        staircase_vector(space, dim, 3),
        Vector::unit(space, dim, 0),
    ];
    for xi in &probes.scalars {
        out.extend(bases.iter().map(|b| b.scale(xi)));
    }
    let pairs: Vec<(Vector, Vector)> = probes
        .pairs()
        .map(|(x, y)| (x.clone(), y.clone()))
        .collect();
    for (x, y) in pairs {
        let members: Vec<usize> = (0..space.len()).filter(|_| rng.random_bool(0.5)).collect();
        let event = Event::new(space, members).expect("atoms are in range");
        out.push(Vector::mix(&event, &x, &y));
    }
    (probes, out)
}

/// Names the law behind `S(x) ≠ A x`, where column `i` of `A` is `S(eᵢ)`.
///
/// With `x = Σ xᵢ eᵢ`, either some partial sum breaks additivity or some
/// `S(xᵢ eᵢ) ≠ xᵢ S(eᵢ)`; otherwise `S(x) = Σ xᵢ S(eᵢ) = A x`.
fn classify(map: &MapSpec, b: &Vector, x: &Vector) -> FailureWitness {
    let space = map.space();
    let dim = map.dim();
    let s = |v: &Vector| &map.apply(v) - b;
    let units: Vec<Vector> = (0..dim).map(|i| Vector::unit(space, dim, i)).collect();
    let parts: Vec<Vector> = (0..dim).map(|i| units[i].scale(&x.coord(i))).collect();
    let mut acc = parts[0].clone();
    for part in &parts[1..] {
        let next = &acc + part;
        if s(&next) != &s(&acc) + &s(part) {
            return FailureWitness::Additivity {
                x: acc,
                y: part.clone(),
            };
        }
        acc = next;
    }
    for (i, part) in parts.iter().enumerate() {
        let xi = x.coord(i);
        if s(part) != s(&units[i]).scale(&xi) {
            return FailureWitness::Homogeneity {
                xi,
                x: units[i].clone(),
            };
        }
    }
    unreachable!(
        "S(x) = A x once additivity and homogeneity hold on the parts of x; is the oracle pure?"
    )
}

/// Certifies `T` as `L⁰`-affine or returns the first violated hypothesis.
///
/// Hypotheses are checked in the order locality, injectivity, line
/// preservation, representation. Requires `n ≥ 2`: for `n = 1` every map
/// preserves the single line, affine or not.
pub fn certify_affine(map: &MapSpec, budget: &ProbeBudget, seed: u64) -> Result<Certification> {
    let dim = map.dim();
    if dim < 2 {
        return Err(L0Error::DimensionTooSmall(dim));
    }
    let space = map.space();
    let (probes, verification) = verification_probes(map, budget, seed);

    let b = map.apply(&Vector::zero(space, dim));

    let locality = is_local_with(map, &probes);
    if let Some(w) = locality.witness {
        return Ok(FailureWitness::Locality(w).into());
    }
    let inj = injectivity(map, &probes);
    if let Some(w) = inj.witness {
        return Ok(FailureWitness::Injectivity(w).into());
    }
    let lines = check_line_preservation(map, budget.line_trials, seed);
    if let Some(w) = lines.witness {
        return Ok(FailureWitness::Line(w).into());
    }

    let columns: Vec<Vector> = (0..dim)
        .map(|i| &map.apply(&Vector::unit(space, dim, i)) - &b)
        .collect();
    let matrices: Vec<Matrix> = (0..space.len())
        .map(|atom| {
            let cols: Vec<_> = columns.iter().map(|c| c.point(atom).to_vec()).collect();
            Matrix::from_columns(&cols).expect("n columns of length n")
        })
        .collect();
    let affine = AffineMap::new(matrices, b.clone())?;

    for x in &verification {
        if affine.eval(x) != map.apply(x) {
            return Ok(classify(map, &b, x).into());
        }
    }

    let representation = match map.as_affine() {
        Some(exact) if exact == affine => Strength::Exact,
        _ => Strength::Sampled,
    };
    log::debug!(
        "certified {:?} map on {} probes ({:?})",
        map.kind(),
        verification.len(),
        representation
    );
    Ok(Certification::Certified(Box::new(AffineCertificate {
        affine,
        verification,
        hypotheses: HypothesisRecord {
            locality: locality.strength,
            injectivity: inj.strength,
            line_forward: Strength::Sampled,
            line_onto: match lines.onto_status {
                OntoStatus::ExactFail => unreachable!("a failed onto check carries a witness"),
                s => s,
            },
            representation,
        },
        provenance: Provenance {
            seed,
            budget: *budget,
        },
    })))
}

/// The common `f` with `S(ξx) = f·S(x)` over `xs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScaleFactor {
    Unique(Scalar),
    /// Two probes demand different factors.
    Inconsistent {
        x: Vector,
        f: Scalar,
        x_other: Vector,
        f_other: Scalar,
    },
}

/// Solves `S(ξx) = f·S(x)` for each full-support `x` by line membership in
/// `l(θ, S(x))`; the solution is unique because `S(x)` has full support.
pub fn scale_factor(s: &MapSpec, xi: &Scalar, xs: &[Vector]) -> Result<ScaleFactor> {
    let space = s.space();
    let dim = s.dim();
    space.ensure_same(xi.space())?;
    let theta = Vector::zero(space, dim);
    if !s.apply(&theta).is_zero() {
        return Err(L0Error::Precondition("S(θ) must be θ".into()));
    }
    if xs.is_empty() {
        return Err(L0Error::Precondition(
            "at least one probe vector is required".into(),
        ));
    }
    let mut first: Option<(&Vector, Scalar)> = None;
    for x in xs {
        s.eval(x)?;
        if !has_full_support(x) {
            return Err(L0Error::Precondition(
                "probe vectors must have full support".into(),
            ));
        }
        let sx = s.apply(x);
        if !has_full_support(&sx) {
            return Err(L0Error::Precondition("S(x) must have full support".into()));
        }
        // S(ξx) = λθ + (1 − λ) S(x), so f = 1 − λ
        let lambda =
            line_membership(&s.apply(&x.scale(xi)), &theta, &sx)?.ok_or(L0Error::NoFactor)?;
        let f = &Scalar::one(space) - &lambda;
        match &first {
            None => first = Some((x, f)),
            Some((x0, f0)) if *f0 != f => {
                return Ok(ScaleFactor::Inconsistent {
                    x: (*x0).clone(),
                    f: f0.clone(),
                    x_other: x.clone(),
                    f_other: f,
                })
            }
            Some(_) => {}
        }
    }
    Ok(ScaleFactor::Unique(first.expect("xs is nonempty").1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certifier::Hypothesis;
    use crate::maps::{make_swap_map, PerAtomMap, Piece};
    use crate::probes::random_full_support_vector;
    use crate::rational::int;
    use crate::space::ProbSpace;

    fn s2() -> ProbSpace {
        ProbSpace::uniform(2).unwrap()
    }

    #[test]
    fn translation_is_certified() {
        let s = s2();
        let b = Vector::from_ints(&s, &[&[1, 1], &[2, 3]]).unwrap();
        let t: MapSpec = AffineMap::translation(b.clone()).into();
        let cert = certify_affine(&t, &ProbeBudget::default(), 0).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(cert.affine.offset(), &b);
        assert!(cert
            .affine
            .matrices()
            .iter()
            .all(|m| *m == Matrix::identity(2)));
        assert_eq!(cert.hypotheses.representation, Strength::Exact);
        assert_eq!(cert.hypotheses.line_onto, OntoStatus::ExactPass);
    }

    #[test]
    fn recovers_per_atom_matrices() {
        let s = s2();
        let a1 = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap();
        let a2 = Matrix::from_int_rows(&[&[2, 0], &[0, 1]]).unwrap();
        let t: MapSpec = AffineMap::linear(&s, vec![a1.clone(), a2.clone()])
            .unwrap()
            .into();
        let cert = certify_affine(&t, &ProbeBudget::default(), 3).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(cert.affine.matrices(), [a1, a2]);
        let mut rng = rng_for(99, 0);
        let fresh: Vec<Vector> = (0..100)
            .map(|_| crate::probes::random_vector(&s, 2, &mut rng))
            .collect();
        assert!(cert.reverify(&t, &fresh));
    }

    #[test]
    fn black_box_certificate_is_sampled() {
        let s = ProbSpace::uniform(3).unwrap();
        let t: MapSpec = AffineMap::new(
            vec![Matrix::from_int_rows(&[&[0, 1], &[1, 1]]).unwrap(); 3],
            Vector::from_ints(&s, &[&[1, 0], &[0, 1], &[2, 2]]).unwrap(),
        )
        .unwrap()
        .into();
        let bb = t.to_black_box();
        let cert = certify_affine(&bb, &ProbeBudget::default(), 5).unwrap();
        let cert = cert.certificate().unwrap();
        assert_eq!(Some(cert.affine.clone()), t.as_affine());
        assert_eq!(cert.hypotheses.representation, Strength::Sampled);
        assert_eq!(cert.hypotheses.locality, Strength::Sampled);
    }

    #[test]
    fn swap_fails_locality_with_spec_witness() {
        let s = s2();
        let swap = make_swap_map(&s, 2).unwrap();
        let out = certify_affine(&swap, &ProbeBudget::default(), 0).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.hypothesis(), Hypothesis::Locality);
        let FailureWitness::Locality(lw) = w else {
            unreachable!()
        };
        assert_eq!(lw.event, s.singleton(0));
        assert_eq!(lw.x, Vector::from_ints(&s, &[&[1, 0], &[2, 0]]).unwrap());
        assert!(w.reproduces(&swap));
    }

    #[test]
    fn singular_atom_fails_injectivity() {
        let s = s2();
        let t: MapSpec = AffineMap::linear(
            &s,
            vec![
                Matrix::identity(2),
                Matrix::from_int_rows(&[&[1, 2], &[2, 4]]).unwrap(),
            ],
        )
        .unwrap()
        .into();
        let out = certify_affine(&t, &ProbeBudget::default(), 0).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.hypothesis(), Hypothesis::Injectivity);
        let FailureWitness::Injectivity(iw) = w else {
            unreachable!()
        };
        assert_eq!(iw.atom(), Some(1));
        assert!(w.reproduces(&t));
    }

    #[test]
    fn cube_fails_line_forward() {
        let s = ProbSpace::uniform(3).unwrap();
        let t: MapSpec =
            PerAtomMap::new(&s, 2, vec![Piece::Identity, Piece::cube(), Piece::Identity])
                .unwrap()
                .into();
        let out = certify_affine(&t, &ProbeBudget::default(), 0).unwrap();
        let w = out.witness().unwrap();
        assert_eq!(w.hypothesis(), Hypothesis::LineForward);
        assert!(w.reproduces(&t));
    }

    #[test]
    fn nonlinear_black_box_gets_an_algebraic_witness() {
        // T(x)(ω) = x(ω) + (x₁(ω)·x₂(ω), 0) maps l(θ, e_j) into itself, so
        // the failure may surface at any later stage; it must reproduce
        let s = s2();
        let t: MapSpec = crate::maps::BlackBoxMap::new(&s, 2, "bilinear", |x: &Vector| {
            x.map_points(2, |_, p| vec![&p[0] + &p[0] * &p[1], p[1].clone()])
        })
        .into();
        let out = certify_affine(&t, &ProbeBudget::default(), 1).unwrap();
        let w = out.witness().expect("not affine");
        assert!(w.reproduces(&t));
    }

    #[test]
    fn one_dimension_is_rejected() {
        let s = s2();
        let t: MapSpec = AffineMap::identity(&s, 1).into();
        assert_eq!(
            certify_affine(&t, &ProbeBudget::default(), 0).unwrap_err(),
            L0Error::DimensionTooSmall(1)
        );
    }

    #[test]
    fn scale_factor_examples() {
        let s = s2();
        let mut rng = rng_for(4, 0);
        let xs: Vec<Vector> = (0..3)
            .map(|_| random_full_support_vector(&s, 2, &mut rng))
            .collect();
        let xi = Scalar::from_ints(&s, &[1, 2]).unwrap();

        let id: MapSpec = AffineMap::identity(&s, 2).into();
        assert_eq!(
            scale_factor(&id, &xi, &xs).unwrap(),
            ScaleFactor::Unique(xi.clone())
        );

        let lin: MapSpec = AffineMap::linear(
            &s,
            vec![
                Matrix::from_int_rows(&[&[1, 1], &[0, 1]]).unwrap(),
                Matrix::from_int_rows(&[&[0, 3], &[1, 0]]).unwrap(),
            ],
        )
        .unwrap()
        .into();
        assert_eq!(
            scale_factor(&lin, &xi, &xs).unwrap(),
            ScaleFactor::Unique(xi.clone())
        );

        let swap = make_swap_map(&s, 2).unwrap();
        assert_eq!(
            scale_factor(&swap, &xi, &xs).unwrap(),
            ScaleFactor::Unique(Scalar::from_ints(&s, &[2, 1]).unwrap())
        );

        let shifted: MapSpec =
            AffineMap::translation(Vector::constant(&s, vec![int(1), int(0)])).into();
        assert!(matches!(
            scale_factor(&shifted, &xi, &xs),
            Err(L0Error::Precondition(_))
        ));
    }

    #[test]
    fn scale_factor_detects_inconsistency_and_missing_factor() {
        let s = ProbSpace::trivial();
        // S(x) = (x₁³, x₂): a factor exists for e₁ and e₂ but they differ
        let t: MapSpec = PerAtomMap::uniform(
            &s,
            2,
            Piece::Power(crate::maps::Exponents::PerCoord(vec![3, 1])),
        )
        .unwrap()
        .into();
        let xi = Scalar::constant(&s, int(2));
        let e1 = Vector::unit(&s, 2, 0);
        let e2 = Vector::unit(&s, 2, 1);
        let out = scale_factor(&t, &xi, &[e1, e2]).unwrap();
        let ScaleFactor::Inconsistent { f, f_other, .. } = out else {
            panic!("expected inconsistent factors")
        };
        assert_eq!(f, Scalar::constant(&s, int(8)));
        assert_eq!(f_other, Scalar::constant(&s, int(2)));

        let ones = Vector::constant(&s, vec![int(1), int(1)]);
        assert_eq!(
            scale_factor(&t, &xi, &[ones]).unwrap_err(),
            L0Error::NoFactor
        );
    }
}
