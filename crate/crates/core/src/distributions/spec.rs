//! Text formats for degree and period specifications.

use super::{DegreeDistribution, PeriodKind, DEFAULT_TAIL_TOL};
use crate::error::{Error, Result};

/// Parses `const:5`, `poisson:5`, `geom:0.1667`, `power:1:13.796` or `pmf:p0,p1,...`.
pub fn parse_degree_spec(spec: &str) -> Result<DegreeDistribution> {
    let spec = spec.trim();
    let (family, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("degree spec `{spec}` has no `family:` prefix")))?;
    match family.to_ascii_lowercase().as_str() {
        "const" | "constant" => {
            let d = rest
                .trim()
                .parse::<usize>()
                .map_err(|e| Error::Parse(format!("constant degree `{rest}`: {e}")))?;
            Ok(DegreeDistribution::constant(d))
        }
        "poisson" | "po" => DegreeDistribution::poisson(number(rest)?, DEFAULT_TAIL_TOL),
        "geom" | "geometric" => DegreeDistribution::geometric(number(rest)?, DEFAULT_TAIL_TOL),
        "power" => {
            let (alpha, kappa) = rest.split_once(':').ok_or_else(|| {
                Error::Parse(format!("power spec needs `alpha:kappa`, got `{rest}`"))
            })?;
            DegreeDistribution::power_cutoff(number(alpha)?, number(kappa)?, DEFAULT_TAIL_TOL)
        }
        "pmf" => {
            let pmf = rest.split(',').map(number).collect::<Result<Vec<_>>>()?;
            DegreeDistribution::from_pmf(pmf)
        }
        other => Err(Error::Parse(format!("unknown degree family `{other}`"))),
    }
}

/// Parses a period family with an optional parameter: `const`, `const:2`,
/// `exp:1.5`, `zeroinf`, `zeroinf:0.3`.
pub fn parse_period_spec(spec: &str) -> Result<(PeriodKind, Option<f64>)> {
    let spec = spec.trim();
    let (family, param) = match spec.split_once(':') {
        Some((f, p)) => (f, Some(number(p)?)),
        None => (spec, None),
    };
    let kind = match family.to_ascii_lowercase().as_str() {
        "const" | "constant" => PeriodKind::Constant,
        "exp" | "exponential" => PeriodKind::Exponential,
        "zeroinf" | "zero-inf" | "01inf" => PeriodKind::ZeroOrInfinity,
        other => return Err(Error::Parse(format!("unknown period family `{other}`"))),
    };
    Ok((kind, param))
}

fn number(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("`{s}` is not a number: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_families() {
        assert_eq!(parse_degree_spec("const:5").unwrap().mean(), 5.0);
        assert!((parse_degree_spec("poisson:5").unwrap().mean() - 5.0).abs() < 1e-9);
        assert!((parse_degree_spec("geom:0.5").unwrap().mean() - 1.0).abs() < 1e-9);
        assert!((parse_degree_spec("power:1:13.796").unwrap().mean() - 5.0).abs() < 0.01);
        let d = parse_degree_spec("pmf:0.25, 0.5,0.25").unwrap();
        assert_eq!(d.mean(), 1.0);
    }

    #[test]
    fn degree_errors() {
        for bad in ["", "poisson", "poisson:x", "power:1", "pmf:0.5,0.6", "weibull:2", "const:-1"] {
            assert!(parse_degree_spec(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn period_specs() {
        assert_eq!(
            parse_period_spec("const").unwrap(),
            (PeriodKind::Constant, None)
        );
        assert_eq!(
            parse_period_spec("exp:2").unwrap(),
            (PeriodKind::Exponential, Some(2.0))
        );
        assert_eq!(
            parse_period_spec("zeroinf:0.3").unwrap(),
            (PeriodKind::ZeroOrInfinity, Some(0.3))
        );
        assert!(parse_period_spec("gamma:2").is_err());
    }
}
