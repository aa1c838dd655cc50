//! Parsers for the compound option values of `simulate` and `scan-reflection`.

use hyperc2pf::{resonant_pair, AngleTuple, BranchPolicy, InputSpec, Outcome, ReflectionPair};
use num_complex::Complex64;

fn number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("expected a number, got `{s}`"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("non-finite number `{s}`"))
    }
}

fn complex(s: &str) -> Result<Complex64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `re,im`, got `{s}`"))?;
    Ok(Complex64::new(number(re)?, number(im)?))
}

/// `ideal`, `x=<coupling>` or `r=<re>,<im>,r0=<re>,<im>`.
pub fn pair(s: &str) -> Result<ReflectionPair, String> {
    if s == "ideal" {
        return Ok(ReflectionPair::IDEAL);
    }
    if let Some(x) = s.strip_prefix("x=") {
        return resonant_pair(number(x)?).map_err(|e| e.to_string());
    }
    if let Some(rest) = s.strip_prefix("r=") {
        let (r, r0) = rest
            .split_once(",r0=")
            .ok_or_else(|| format!("expected `r=re,im,r0=re,im`, got `{s}`"))?;
        return ReflectionPair::new(complex(r)?, complex(r0)?).map_err(|e| e.to_string());
    }
    Err(format!(
        "unknown pair `{s}`; use ideal, x=<val> or r=<re,im>,r0=<re,im>"
    ))
}

/// `angles=alpha,beta,delta,sigma,zeta,xi` or `basis=<six bits>` with bits
/// in pol_a, spat_a, pol_b, spat_b, pol_c, spat_c order.
pub fn input(s: &str) -> Result<InputSpec, String> {
    if let Some(list) = s.strip_prefix("angles=") {
        let v = list.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
        let a: [f64; 6] = v
            .try_into()
            .map_err(|v: Vec<f64>| format!("expected 6 angles, got {}", v.len()))?;
        return Ok(InputSpec::from_angles(&AngleTuple::from_array(a)));
    }
    if let Some(bits) = s.strip_prefix("basis=") {
        let v = bits
            .chars()
            .map(|c| match c {
                '0' => Ok(0),
                '1' => Ok(1),
                _ => Err(format!("basis bits must be 0 or 1, got `{c}`")),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let b: [usize; 6] = v
            .try_into()
            .map_err(|v: Vec<usize>| format!("expected 6 basis bits, got {}", v.len()))?;
        return Ok(InputSpec::basis(b));
    }
    Err(format!(
        "unknown input `{s}`; use angles=<6 values> or basis=<6 bits>"
    ))
}

/// `enumerate`, `sample` (seeded by `seed`) or `fixed=<+/- per NV>`.
pub fn branch(s: &str, seed: Option<u64>) -> Result<BranchPolicy, String> {
    match s {
        "enumerate" => Ok(BranchPolicy::Enumerate),
        "sample" => seed
            .map(BranchPolicy::Sample)
            .ok_or_else(|| "--branch sample needs --seed".to_string()),
        _ => {
            let signs = s
                .strip_prefix("fixed=")
                .ok_or_else(|| format!("unknown branch policy `{s}`"))?;
            signs
                .chars()
                .map(|c| match c {
                    '+' => Ok(Outcome::PlusPrime),
                    '-' => Ok(Outcome::MinusPrime),
                    _ => Err(format!("outcomes must be + or -, got `{c}`")),
                })
                .collect::<Result<Vec<_>, _>>()
                .map(BranchPolicy::Fixed)
        }
    }
}

/// `min:max`.
pub fn range(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected `min:max`, got `{s}`"))?;
    let (a, b) = (number(a)?, number(b)?);
    if a > b {
        return Err(format!("range `{s}` is reversed"));
    }
    Ok((a, b))
}
