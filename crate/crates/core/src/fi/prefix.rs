use super::{CheckReport, DifferenceOperatorId, PrefixTable, WeightedSpace, CHECK_TOL};
use crate::error::{Error, Result};
use crate::space::PrefixSpace;

fn sampling_factor(space: &PrefixSpace) -> f64 {
    1.0 - space.prefix_len() as f64 / space.spec().total() as f64
}

/// `4(1 − n/N)` for `𝔥`, `8(1 − n/N)` for `𝔥⁺`.
pub fn swor_mlsi_sigma_sq(space: &PrefixSpace, op: DifferenceOperatorId) -> Result<f64> {
    let base = match op {
        DifferenceOperatorId::H => 4.0,
        DifferenceOperatorId::HPlus => 8.0,
        other => {
            return Err(Error::InvalidArgument(format!(
                "no sampling-without-replacement mLSI for `{other}`"
            )))
        }
    };
    Ok(base * sampling_factor(space))
}

/// `2 log(N/κ_min)(1 − n/N) / log 2`.
pub fn swor_lsi_sigma_sq(space: &PrefixSpace) -> f64 {
    let spec = space.spec();
    2.0 * (spec.total() as f64 / spec.kappa_min() as f64).ln() * sampling_factor(space)
        / std::f64::consts::LN_2
}

fn require_symmetric(f: &PrefixTable<'_>) -> Result<()> {
    if f.is_symmetric() {
        Ok(())
    } else {
        Err(Error::Hypothesis(
            "function is not symmetric under permutations of the sample".into(),
        ))
    }
}

/// `Ent_{κ,n}(e^f) ≤ (σ²/2) 𝔼 𝔥(f)² e^f` for symmetric `f`, with `σ²` from
/// [`swor_mlsi_sigma_sq`].
pub fn check_swor_mlsi(f: &PrefixTable<'_>, op: DifferenceOperatorId) -> Result<CheckReport> {
    let sigma_sq = swor_mlsi_sigma_sq(f.space(), op)?;
    require_symmetric(f)?;
    let h = f.h_sq(op)?;
    let ent = f.map(f64::exp)?.entropy()?;
    let rhs = sigma_sq / 2.0 * f.expect_with(|v, k| h[k] * v.exp());
    let id = if op == DifferenceOperatorId::H { "swor-mlsi-h" } else { "swor-mlsi-h-plus" };
    Ok(CheckReport::new(id, f.space().describe(), Some(sigma_sq), ent, rhs, CHECK_TOL))
}

/// `Ent_{κ,n}(f²) ≤ 2σ² 𝔼 𝔥(f)²` for symmetric `f`.
pub fn check_swor_lsi(f: &PrefixTable<'_>) -> Result<CheckReport> {
    require_symmetric(f)?;
    let sigma_sq = swor_lsi_sigma_sq(f.space());
    let h = f.h_sq(DifferenceOperatorId::H)?;
    let ent = f.map(|v| v * v)?.entropy()?;
    let rhs = 2.0 * sigma_sq * f.expect_with(|_, k| h[k]);
    Ok(CheckReport::new("swor-lsi", f.space().describe(), Some(sigma_sq), ent, rhs, CHECK_TOL))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::MultisliceSpec;

    fn space(kappa: &[usize], n: usize) -> PrefixSpace {
        let spec = MultisliceSpec::new(kappa.to_vec(), (0..kappa.len()).map(|l| l as f64).collect())
            .unwrap();
        PrefixSpace::new(&spec, n, 10_000).unwrap()
    }

    #[test]
    fn symmetric_sum_passes() {
        let sp = space(&[2, 2], 2);
        let f = PrefixTable::from_fn(&sp, |w| w.iter().sum()).unwrap();
        for op in [DifferenceOperatorId::H, DifferenceOperatorId::HPlus] {
            assert!(check_swor_mlsi(&f, op).unwrap().passed());
        }
        let g = PrefixTable::from_fn(&sp, |w| 1.0 + w.iter().sum::<f64>()).unwrap();
        assert!(check_swor_lsi(&g).unwrap().passed());
    }

    #[test]
    fn constants_pass() {
        let sp = space(&[2, 1, 2], 3);
        let c = PrefixTable::new(&sp, vec![0.4; sp.len()]).unwrap();
        assert!(check_swor_mlsi(&c, DifferenceOperatorId::H).unwrap().passed());
        assert!(check_swor_lsi(&c).unwrap().passed());
    }

    #[test]
    fn first_coordinate_is_rejected() {
        let sp = space(&[2, 2], 2);
        let f = PrefixTable::from_fn(&sp, |w| w[0]).unwrap();
        assert!(matches!(
            check_swor_mlsi(&f, DifferenceOperatorId::H),
            Err(Error::Hypothesis(_))
        ));
        assert!(check_swor_mlsi(&f, DifferenceOperatorId::Gamma).is_err());
    }

    #[test]
    fn h_plus_is_dominated_by_h() {
        let sp = space(&[3, 2], 2);
        let f = PrefixTable::from_fn(&sp, |w| w.iter().map(|x| x * x).sum::<f64>().sin()).unwrap();
        let h = f.h_sq(DifferenceOperatorId::H).unwrap();
        let hp = f.h_sq(DifferenceOperatorId::HPlus).unwrap();
        assert!(h.iter().zip(&hp).all(|(a, b)| b <= a));
    }

    #[test]
    fn full_sample_factor_vanishes() {
        let sp = space(&[2, 1], 3);
        assert_eq!(swor_mlsi_sigma_sq(&sp, DifferenceOperatorId::HPlus).unwrap(), 0.0);
        let f = PrefixTable::from_fn(&sp, |w| w.iter().sum()).unwrap();
        let r = check_swor_mlsi(&f, DifferenceOperatorId::H).unwrap();
        assert!(r.passed());
        assert!(r.lhs.abs() < 1e-15);
    }
}
