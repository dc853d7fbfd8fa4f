//! Parallel drivers. Work is split into fixed, index-addressed items and the
//! results are combined in index order, so the output does not depend on the
//! number of workers.

use murmur_core::complexfn::{AfeParameters, QuadratureSpec};
use murmur_core::discriminants::DiscriminantFamily;
use murmur_core::lfunc::mean::MEAN_VALUE_TOLERANCE;
use murmur_core::lfunc::{GL1Representation, MeanValueKit};
use murmur_core::murmur::{compare_with, ComparisonRow, RhsIntegrand, RhsMode, RhsPlan};
use murmur_core::sum::Pairwise;
use murmur_core::{Complex64, Error, Result};
use rayon::prelude::*;

/// A pool with `workers` threads (`0` picks the number of cores).
pub fn pool(workers: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
}

/// Same values as [`RhsIntegrand::build`], with the blocks spread over the pool.
pub fn rhs_integrand(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    spec: &QuadratureSpec,
    mode: RhsMode,
) -> Result<RhsIntegrand> {
    let plan = RhsPlan::new(rep, family, spec, mode)?;
    let blocks = (0..plan.block_count())
        .into_par_iter()
        .map(|b| plan.block(b))
        .collect::<Result<Vec<_>>>()?;
    plan.finish(blocks)
}

/// Both sides of the murmuration comparison on `xs`.
pub fn compare(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    xs: &[f64],
    spec: &QuadratureSpec,
    mode: RhsMode,
) -> Result<(RhsIntegrand, Vec<ComparisonRow>)> {
    let integrand = rhs_integrand(rep, family, spec, mode)?;
    let rows = compare_with(rep, family, xs, &integrand)?;
    Ok((integrand, rows))
}

/// Same value as `mean_value_empirical`, one member per work item.
pub fn mean_value(
    rep: &GL1Representation,
    family: &DiscriminantFamily,
    s: Complex64,
    p: &AfeParameters,
) -> Result<Complex64> {
    if !(s.re > 0.5 && s.re < 1.0) {
        return Err(Error::Domain(format!("mean value needs 1/2 < Re s < 1, got {s}")));
    }
    if rep.chi().is_trivial() {
        return Err(Error::NotEntire);
    }
    let d_max = *family.members.last().ok_or(Error::EmptyFamily)?;
    let kit = MeanValueKit::new(rep, s, p, d_max, MEAN_VALUE_TOLERANCE)?;
    let values = family
        .members
        .par_iter()
        .map(|&d| kit.twisted_value(d))
        .collect::<Result<Vec<_>>>()?;
    Ok(values.into_iter().collect::<Pairwise<_>>().finish() / family.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use murmur_core::characters::primitive_characters;
    use murmur_core::discriminants::enumerate_family;
    use murmur_core::lfunc::mean_value_empirical;

    #[test]
    fn parallel_mean_matches_serial_bitwise() {
        let chi = primitive_characters(5).into_iter().find(|c| c.order() == 2).unwrap();
        let rep = GL1Representation::new(chi, 0.0).unwrap();
        let fam = enumerate_family(1000.0, 2000.0, 5, 1).unwrap();
        let s = Complex64::new(0.75, 0.0);
        let p = AfeParameters::numeric();
        let serial = mean_value_empirical(&rep, &fam, s, &p).unwrap();
        for workers in [1, 3] {
            let par = pool(workers).install(|| mean_value(&rep, &fam, s, &p)).unwrap();
            assert_eq!(par, serial);
        }
    }

    #[test]
    fn parallel_integrand_matches_serial_bitwise() {
        let chi = primitive_characters(7).into_iter().find(|c| c.order() == 6).unwrap();
        let rep = GL1Representation::new(chi, 2.0).unwrap();
        let fam = enumerate_family(9000.0, 11000.0, 7, 1).unwrap();
        let spec = QuadratureSpec {
            t_max: 40.0,
            nodes: 5001,
            prime_cutoff: 500,
            abscissa: 0.75,
        };
        let serial = RhsIntegrand::build(&rep, &fam, &spec, RhsMode::Sharp).unwrap();
        let par = pool(2).install(|| rhs_integrand(&rep, &fam, &spec, RhsMode::Sharp)).unwrap();
        for x in [5000.0, 20000.5] {
            assert_eq!(serial.eval(x).unwrap(), par.eval(x).unwrap());
        }
    }
}
