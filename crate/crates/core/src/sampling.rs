//! Uniform sampling on `Ω_κ` and `n`-out-of-`N` sampling without replacement.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::spec::{Configuration, MultisliceSpec};

/// A uniform element of `Ω_κ`: Fisher–Yates shuffle of the canonical
/// arrangement.
pub fn sample_uniform<R: Rng + ?Sized>(spec: &MultisliceSpec, rng: &mut R) -> Configuration {
    let mut idx = spec.canonical_indices();
    idx.shuffle(rng);
    spec.from_indices(&idx)
}

/// Value indices of a uniform element of `Ω_κ`.
pub fn sample_uniform_indices<R: Rng + ?Sized>(spec: &MultisliceSpec, rng: &mut R) -> Vec<usize> {
    let mut idx = spec.canonical_indices();
    idx.shuffle(rng);
    idx
}

/// The first `n` entries of a uniform element of `Ω_κ`, distributed as `ℙ_{κ,n}`.
pub fn sample_without_replacement<R: Rng + ?Sized>(
    spec: &MultisliceSpec,
    n: usize,
    rng: &mut R,
) -> Result<Configuration> {
    let total = spec.total();
    if n == 0 || n > total {
        return Err(Error::InvalidArgument(format!(
            "sample size must lie in 1..={total}, got {n}"
        )));
    }
    let full = sample_uniform(spec, rng);
    full.prefix(n)
}

/// All values `x_ℓ` that may replace `prefix[i]` while keeping every count
/// within `κ_ℓ`. Always contains the current value.
pub fn admissible_replacements(
    prefix: &Configuration,
    spec: &MultisliceSpec,
    i: usize,
) -> Result<Vec<f64>> {
    if i >= prefix.len() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: prefix.len(),
        });
    }
    if !spec.is_prefix(prefix) {
        return Err(Error::InvalidArgument(
            "configuration is not an element of any prefix space of the spec".into(),
        ));
    }
    let counts = spec.counts(prefix)?;
    let current = spec.value_index(prefix.entries()[i]).expect("checked by is_prefix");
    Ok((0..spec.num_values())
        .filter(|&l| l == current || counts[l] < spec.kappa()[l])
        .map(|l| spec.values()[l])
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamFactory;

    fn binary(kappa: &[usize]) -> MultisliceSpec {
        MultisliceSpec::new(kappa.to_vec(), vec![0.0, 1.0]).unwrap()
    }

    #[test]
    fn samples_are_members() {
        let s = MultisliceSpec::new(vec![3, 1, 4], vec![-2.0, 0.0, 5.0]).unwrap();
        let mut rng = StreamFactory::new(1).stream(0);
        for _ in 0..200 {
            assert!(s.is_member(&sample_uniform(&s, &mut rng)));
        }
    }

    #[test]
    fn two_point_frequency() {
        let s = binary(&[1, 1]);
        let mut rng = StreamFactory::new(2).stream(0);
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|_| sample_uniform(&s, &mut rng).entries() == [0.0, 1.0])
            .count();
        let p = hits as f64 / draws as f64;
        let se = (0.25 / draws as f64).sqrt();
        assert!((p - 0.5).abs() < 3.0 * se, "p = {p}");
    }

    #[test]
    fn full_prefix_is_full_configuration() {
        let s = binary(&[2, 3]);
        let mut rng = StreamFactory::new(3).stream(0);
        let c = sample_without_replacement(&s, 5, &mut rng).unwrap();
        assert!(s.is_member(&c));
        assert!(sample_without_replacement(&s, 0, &mut rng).is_err());
        assert!(sample_without_replacement(&s, 6, &mut rng).is_err());
    }

    #[test]
    fn first_draw_exchangeability() {
        let s = binary(&[3, 1]);
        let mut rng = StreamFactory::new(4).stream(0);
        let draws = 100_000;
        let hits = (0..draws)
            .filter(|_| sample_without_replacement(&s, 1, &mut rng).unwrap().entries()[0] == 1.0)
            .count();
        let p = hits as f64 / draws as f64;
        let se = (0.25 * 0.75 / draws as f64).sqrt();
        assert!((p - 0.25).abs() < 3.0 * se, "p = {p}");
    }

    #[test]
    fn admissible_replacement_examples() {
        let s = binary(&[2, 2]);
        let full = Configuration::new(vec![0.0, 1.0, 1.0, 0.0]);
        for i in 0..4 {
            assert_eq!(
                admissible_replacements(&full, &s, i).unwrap(),
                vec![full.entries()[i]]
            );
        }
        let p = Configuration::new(vec![0.0]);
        assert_eq!(admissible_replacements(&p, &s, 0).unwrap(), vec![0.0, 1.0]);
        let p = Configuration::new(vec![0.0, 0.0]);
        assert_eq!(admissible_replacements(&p, &s, 0).unwrap(), vec![0.0, 1.0]);
        let p = Configuration::new(vec![1.0, 1.0, 0.0]);
        assert_eq!(admissible_replacements(&p, &s, 2).unwrap(), vec![0.0]);
        assert_eq!(admissible_replacements(&p, &s, 0).unwrap(), vec![0.0, 1.0]);
        assert!(admissible_replacements(&p, &s, 3).is_err());
    }
}
