//! Frequency models: laws of the nonincreasing tail-mass sequence (H_k).
//!
//! Three equivalent coordinate systems appear throughout: tail masses
//! `H_k` (with `H_0 = 1`), block frequencies `P_k = H_{k-1} - H_k`, and
//! residual fractions `W_k = H_k / H_{k-1}`. A model describes the joint
//! law of the whole path; [`HPath`] realizes one path lazily so a sampler
//! can keep extending it as blocks appear.
//!
//! Model text grammar (shared with the CLI):
//! `fixed:0.5,0.25;geom=0.5` | `fixed:0.5,0.25;stop` | `iid:uniform` |
//! `iid:beta(a,b)` | `iid:point(w)` | `indep-beta:a=...,b=...` (affine
//! `a0+a1k` forms allowed) | `gem:alpha,theta`.

use std::fmt;

use rand_distr::Distribution;
use statrs::function::gamma::digamma;

use crate::error::{Error, Result};
use crate::special::trigamma;
use crate::stream::RandomStream;

/// Default guard on lazy path extension.
pub const DEFAULT_MAX_BLOCKS: usize = 1_000_000;

/// Law of a single residual fraction W on [0, 1].
///
/// `Beta { a, b }` uses the density `(1-s)^(a-1) s^(b-1) / B(a,b)`; note
/// the roles of `a` and `b` relative to the usual parametrization (the
/// `a`-side exponent sits on `1-s`). `Uniform` equals `Beta { a: 1, b: 1 }`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WDistribution {
    PointMass(f64),
    Uniform,
    Beta { a: f64, b: f64 },
}

impl WDistribution {
    fn validate(&self) -> Result<()> {
        match *self {
            WDistribution::PointMass(w) => {
                if !(0.0..=1.0).contains(&w) {
                    return Err(Error::InvalidParameter(format!(
                        "point mass {w} outside [0,1]"
                    )));
                }
            }
            WDistribution::Uniform => {}
            WDistribution::Beta { a, b } => {
                if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                    return Err(Error::InvalidParameter(format!(
                        "beta parameters must be positive, got ({a}, {b})"
                    )));
                }
            }
        }
        Ok(())
    }

    fn draw(&self, stream: &mut RandomStream) -> f64 {
        match *self {
            WDistribution::PointMass(w) => w,
            WDistribution::Uniform => stream.uniform(),
            // Density (1-s)^(a-1) s^(b-1): the standard Beta(b, a).
            WDistribution::Beta { a, b } => rand_distr::Beta::new(b, a)
                .expect("validated parameters")
                .sample(stream),
        }
    }
}

/// Affine sequence `k -> base + slope * k` for 1-based `k`; used for the
/// per-block beta parameters of independent-residual models.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineSeq {
    pub base: f64,
    pub slope: f64,
}

impl AffineSeq {
    pub fn constant(c: f64) -> Self {
        AffineSeq {
            base: c,
            slope: 0.0,
        }
    }

    #[inline]
    pub fn at(&self, k: usize) -> f64 {
        self.base + self.slope * k as f64
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.base.is_finite() || !self.slope.is_finite() {
            return Err(Error::InvalidParameter(format!("{name}: non-finite affine")));
        }
        if self.slope < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name}: negative slope would eventually produce a non-positive parameter"
            )));
        }
        if self.at(1) <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "{name}: value at k = 1 must be positive"
            )));
        }
        Ok(())
    }
}

/// Continuation rule for a fixed tail-mass list.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Tail {
    /// Continue geometrically: H_{m+j} = H_m * ratio^j.
    Geometric(f64),
    /// No values past the list; asking for more is a hard error. Only
    /// suitable for exact-law evaluation, not for unbounded sampling —
    /// a sampler that outruns the list must fail rather than leave
    /// elements without a block.
    Stop,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FrequencyModel {
    /// Deterministic tail masses.
    FixedH { values: Vec<f64>, tail: Tail },
    /// Stick-breaking with i.i.d. residual fractions: H_k = W_1 ... W_k.
    IidStick(WDistribution),
    /// Independent residual fractions W_k ~ Beta(a_k, b_k) (density
    /// convention as in [`WDistribution::Beta`]).
    IndepBeta { a: AffineSeq, b: AffineSeq },
    /// The two-parameter (alpha, theta) family on rho = (1,1,...),
    /// realized as independent betas with a_k = 1 - alpha and
    /// b_k = theta + k alpha.
    TwoParameter { alpha: f64, theta: f64 },
}

impl FrequencyModel {
    pub fn fixed(values: Vec<f64>, tail: Tail) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "fixed model needs at least one tail mass".into(),
            ));
        }
        let mut prev = 1.0f64;
        for &v in &values {
            if !(v > 0.0 && v <= 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "fixed tail masses must lie in (0,1], got {v}"
                )));
            }
            if v >= prev && prev != 1.0 {
                return Err(Error::InvalidParameter(
                    "fixed tail masses must be strictly decreasing".into(),
                ));
            }
            if v > prev {
                return Err(Error::InvalidParameter(
                    "fixed tail masses must not exceed 1".into(),
                ));
            }
            prev = v;
        }
        if let Tail::Geometric(r) = tail {
            if !(r > 0.0 && r < 1.0) {
                return Err(Error::InvalidParameter(format!(
                    "geometric continuation ratio must lie in (0,1), got {r}"
                )));
            }
        }
        Ok(FrequencyModel::FixedH { values, tail })
    }

    pub fn iid(w: WDistribution) -> Result<Self> {
        w.validate()?;
        Ok(FrequencyModel::IidStick(w))
    }

    pub fn indep_beta(a: AffineSeq, b: AffineSeq) -> Result<Self> {
        a.validate("a")?;
        b.validate("b")?;
        Ok(FrequencyModel::IndepBeta { a, b })
    }

    pub fn two_parameter(alpha: f64, theta: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) || !(theta > -alpha) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "two-parameter family needs 0 <= alpha < 1 and theta > -alpha, got ({alpha}, {theta})"
            )));
        }
        Ok(FrequencyModel::TwoParameter { alpha, theta })
    }

    pub fn uniform_stick() -> Self {
        FrequencyModel::IidStick(WDistribution::Uniform)
    }

    /// Per-block beta parameters `(a_k, b_k)` when the residual fractions
    /// are independent betas; `None` for fixed or point-mass models.
    pub fn residual_beta_at(&self, k: usize) -> Option<(f64, f64)> {
        match *self {
            FrequencyModel::IidStick(WDistribution::Uniform) => Some((1.0, 1.0)),
            FrequencyModel::IidStick(WDistribution::Beta { a, b }) => Some((a, b)),
            FrequencyModel::IndepBeta { a, b } => Some((a.at(k), b.at(k))),
            FrequencyModel::TwoParameter { alpha, theta } => {
                Some((1.0 - alpha, theta + k as f64 * alpha))
            }
            _ => None,
        }
    }

    pub fn has_beta_residuals(&self) -> bool {
        self.residual_beta_at(1).is_some()
    }

    /// For models whose path is deterministic (fixed lists and point
    /// masses): the prefix H_1..H_k.
    pub fn deterministic_h_prefix(&self, k: usize) -> Option<Result<Vec<f64>>> {
        match self {
            FrequencyModel::FixedH { values, tail } => {
                let mut out = Vec::with_capacity(k);
                for i in 1..=k {
                    if i <= values.len() {
                        out.push(values[i - 1]);
                    } else {
                        match tail {
                            Tail::Geometric(r) => {
                                let last = *out.last().unwrap_or(&1.0);
                                out.push(last * r);
                            }
                            Tail::Stop => {
                                return Some(Err(Error::ModelExhausted {
                                    index: i,
                                    len: values.len(),
                                }))
                            }
                        }
                    }
                }
                Some(Ok(out))
            }
            FrequencyModel::IidStick(WDistribution::PointMass(w)) => {
                let mut out = Vec::with_capacity(k);
                let mut h = 1.0;
                for _ in 0..k {
                    h *= w;
                    out.push(h);
                }
                Some(Ok(out))
            }
            _ => None,
        }
    }

    /// Logarithmic moments of a single residual fraction,
    /// `mu = E[-log W]` and `sigma2 = Var[-log W]`; defined for i.i.d.
    /// stick-breaking models with nondegenerate W.
    pub fn log_moments(&self) -> Result<LogMoments> {
        let w = match self {
            FrequencyModel::IidStick(w) => w,
            _ => {
                return Err(Error::InvalidModel(
                    "log moments are defined for iid stick-breaking models".into(),
                ))
            }
        };
        match *w {
            WDistribution::PointMass(p) => {
                if p <= 0.0 {
                    Err(Error::InvalidParameter(
                        "point mass at 0 has no finite log moments".into(),
                    ))
                } else {
                    Ok(LogMoments {
                        mu: -p.ln(),
                        sigma2: 0.0,
                    })
                }
            }
            WDistribution::Uniform => Ok(LogMoments {
                mu: 1.0,
                sigma2: 1.0,
            }),
            // W has the standard Beta(b, a) law, so
            // E[-log W] = psi(a+b) - psi(b), Var[-log W] = psi'(b) - psi'(a+b).
            WDistribution::Beta { a, b } => Ok(LogMoments {
                mu: digamma(a + b) - digamma(b),
                sigma2: trigamma(b) - trigamma(a + b),
            }),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        parse_model(s)
    }
}

/// `mu = E[-log W]`, `sigma2 = Var[-log W]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogMoments {
    pub mu: f64,
    pub sigma2: f64,
}

/// One lazily realized path 1 = H_0 >= H_1 >= H_2 >= ... of a frequency
/// model. Re-requesting a smaller prefix never redraws: the same path
/// keeps extending, which is what samplers rely on.
#[derive(Debug, Clone)]
pub struct HPath {
    model: FrequencyModel,
    /// h[k] = H_k with h[0] = 1.
    h: Vec<f64>,
    max_blocks: usize,
}

impl HPath {
    pub fn new(model: &FrequencyModel) -> Self {
        Self::with_max_blocks(model, DEFAULT_MAX_BLOCKS)
    }

    pub fn with_max_blocks(model: &FrequencyModel, max_blocks: usize) -> Self {
        HPath {
            model: model.clone(),
            h: vec![1.0],
            max_blocks,
        }
    }

    /// Extend the realized path so H_k exists.
    #[inline]
    pub fn ensure(&mut self, k: usize, stream: &mut RandomStream) -> Result<()> {
        while self.h.len() <= k {
            self.extend_one(stream)?;
        }
        Ok(())
    }

    /// H_0..H_k as a slice (index j holds H_j).
    #[inline]
    pub fn prefix(&mut self, k: usize, stream: &mut RandomStream) -> Result<&[f64]> {
        self.ensure(k, stream)?;
        Ok(&self.h[..=k])
    }

    /// H_k.
    pub fn h(&mut self, k: usize, stream: &mut RandomStream) -> Result<f64> {
        self.ensure(k, stream)?;
        Ok(self.h[k])
    }

    /// Everything realized so far, starting at H_0 = 1.
    pub fn realized(&self) -> &[f64] {
        &self.h
    }

    /// Realized H_1..: the form most call sites want.
    pub fn realized_tail(&self) -> &[f64] {
        &self.h[1..]
    }

    fn extend_one(&mut self, stream: &mut RandomStream) -> Result<()> {
        let k = self.h.len(); // next index to realize
        if k > self.max_blocks {
            return Err(Error::MaxBlocks {
                limit: self.max_blocks,
            });
        }
        let last = self.h[k - 1];
        let next = match &self.model {
            FrequencyModel::FixedH { values, tail } => {
                if k <= values.len() {
                    values[k - 1]
                } else {
                    match tail {
                        Tail::Geometric(r) => last * r,
                        Tail::Stop => {
                            return Err(Error::ModelExhausted {
                                index: k,
                                len: values.len(),
                            })
                        }
                    }
                }
            }
            FrequencyModel::IidStick(w) => last * w.draw(stream),
            FrequencyModel::IndepBeta { .. } | FrequencyModel::TwoParameter { .. } => {
                let (a, b) = self
                    .model
                    .residual_beta_at(k)
                    .expect("beta-residual model");
                let w = rand_distr::Beta::new(b, a)
                    .map_err(|e| Error::InvalidParameter(format!("beta({a},{b}) at k={k}: {e}")))?
                    .sample(stream);
                last * w
            }
        };
        self.h.push(next.min(last));
        Ok(())
    }
}

/// One-shot convenience: realize H_1..H_k of a fresh path.
pub fn draw_h(model: &FrequencyModel, k: usize, stream: &mut RandomStream) -> Result<Vec<f64>> {
    let mut path = HPath::new(model);
    path.ensure(k, stream)?;
    Ok(path.realized_tail().to_vec())
}

fn parse_model(s: &str) -> Result<FrequencyModel> {
    let err = |pos: usize, msg: String| Error::Parse {
        what: "model",
        position: pos,
        message: msg,
    };
    let colon = s
        .find(':')
        .ok_or_else(|| err(s.len(), "expected `kind:...`".into()))?;
    let kind = &s[..colon];
    let rest = &s[colon + 1..];
    let base = colon + 1;
    match kind {
        "fixed" => {
            let (list_part, tail) = match rest.find(';') {
                Some(i) => {
                    let tail_s = &rest[i + 1..];
                    let tail = if tail_s == "stop" {
                        Tail::Stop
                    } else if let Some(r) = tail_s.strip_prefix("geom=") {
                        let ratio: f64 = r.parse().map_err(|_| {
                            err(base + i + 6, format!("bad geometric ratio `{r}`"))
                        })?;
                        Tail::Geometric(ratio)
                    } else {
                        return Err(err(
                            base + i + 1,
                            format!("expected `geom=r` or `stop`, got `{tail_s}`"),
                        ));
                    };
                    (&rest[..i], tail)
                }
                None => (rest, Tail::Stop),
            };
            let mut values = Vec::new();
            let mut pos = base;
            for tok in list_part.split(',') {
                let t = tok.trim();
                values.push(
                    t.parse::<f64>()
                        .map_err(|_| err(pos, format!("bad tail mass `{t}`")))?,
                );
                pos += tok.len() + 1;
            }
            FrequencyModel::fixed(values, tail)
        }
        "iid" => {
            if rest == "uniform" {
                FrequencyModel::iid(WDistribution::Uniform)
            } else if let Some(args) = rest.strip_prefix("beta(").and_then(|r| r.strip_suffix(')'))
            {
                let (a, b) = parse_pair(args, base + 5)?;
                FrequencyModel::iid(WDistribution::Beta { a, b })
            } else if let Some(arg) = rest.strip_prefix("point(").and_then(|r| r.strip_suffix(')'))
            {
                let w: f64 = arg
                    .trim()
                    .parse()
                    .map_err(|_| err(base + 6, format!("bad point mass `{arg}`")))?;
                FrequencyModel::iid(WDistribution::PointMass(w))
            } else {
                Err(err(
                    base,
                    format!("expected `uniform`, `beta(a,b)` or `point(w)`, got `{rest}`"),
                ))
            }
        }
        "indep-beta" => {
            let mut a = None;
            let mut b = None;
            let mut pos = base;
            for tok in rest.split(',') {
                let t = tok.trim();
                if let Some(v) = t.strip_prefix("a=") {
                    a = Some(parse_affine(v, pos + 2)?);
                } else if let Some(v) = t.strip_prefix("b=") {
                    b = Some(parse_affine(v, pos + 2)?);
                } else {
                    return Err(err(pos, format!("expected `a=...` or `b=...`, got `{t}`")));
                }
                pos += tok.len() + 1;
            }
            match (a, b) {
                (Some(a), Some(b)) => FrequencyModel::indep_beta(a, b),
                _ => Err(err(s.len(), "indep-beta needs both a= and b=".into())),
            }
        }
        "gem" => {
            let (alpha, theta) = parse_pair(rest, base)?;
            FrequencyModel::two_parameter(alpha, theta)
        }
        other => Err(err(
            0,
            format!("unknown model kind `{other}` (fixed | iid | indep-beta | gem)"),
        )),
    }
}

fn parse_pair(s: &str, pos: usize) -> Result<(f64, f64)> {
    let mut it = s.split(',');
    let parse_one = |tok: Option<&str>| -> Result<f64> {
        let t = tok
            .ok_or_else(|| Error::Parse {
                what: "model",
                position: pos,
                message: "expected two comma-separated numbers".into(),
            })?
            .trim();
        t.parse().map_err(|_| Error::Parse {
            what: "model",
            position: pos,
            message: format!("bad number `{t}`"),
        })
    };
    let a = parse_one(it.next())?;
    let b = parse_one(it.next())?;
    if it.next().is_some() {
        return Err(Error::Parse {
            what: "model",
            position: pos,
            message: "expected exactly two numbers".into(),
        });
    }
    Ok((a, b))
}

/// `"2"`, `"0.5+0.5k"` or `"0.5k"`.
fn parse_affine(s: &str, pos: usize) -> Result<AffineSeq> {
    let err = |msg: String| Error::Parse {
        what: "model",
        position: pos,
        message: msg,
    };
    let t = s.trim();
    if let Some(body) = t.strip_suffix('k') {
        match body.rsplit_once('+') {
            Some((c0, c1)) => Ok(AffineSeq {
                base: c0
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad affine base `{c0}`")))?,
                slope: c1
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad affine slope `{c1}`")))?,
            }),
            None => Ok(AffineSeq {
                base: 0.0,
                slope: body
                    .trim()
                    .parse()
                    .map_err(|_| err(format!("bad affine slope `{body}`")))?,
            }),
        }
    } else {
        Ok(AffineSeq::constant(t.parse().map_err(|_| {
            err(format!("bad affine constant `{t}`"))
        })?))
    }
}

impl fmt::Display for FrequencyModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyModel::FixedH { values, tail } => {
                write!(f, "fixed:")?;
                for (i, v) in values.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{v}")?;
                }
                match tail {
                    Tail::Geometric(r) => write!(f, ";geom={r}"),
                    Tail::Stop => write!(f, ";stop"),
                }
            }
            FrequencyModel::IidStick(WDistribution::Uniform) => write!(f, "iid:uniform"),
            FrequencyModel::IidStick(WDistribution::Beta { a, b }) => {
                write!(f, "iid:beta({a},{b})")
            }
            FrequencyModel::IidStick(WDistribution::PointMass(w)) => write!(f, "iid:point({w})"),
            FrequencyModel::IndepBeta { a, b } => {
                let aff = |x: &AffineSeq| {
                    if x.slope == 0.0 {
                        format!("{}", x.base)
                    } else if x.base == 0.0 {
                        format!("{}k", x.slope)
                    } else {
                        format!("{}+{}k", x.base, x.slope)
                    }
                };
                write!(f, "indep-beta:a={},b={}", aff(a), aff(b))
            }
            FrequencyModel::TwoParameter { alpha, theta } => write!(f, "gem:{alpha},{theta}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_model_extends_geometrically() {
        let m = FrequencyModel::parse("fixed:0.5,0.25;geom=0.5").unwrap();
        let mut stream = RandomStream::new(0);
        let h = draw_h(&m, 4, &mut stream).unwrap();
        assert_eq!(h, vec![0.5, 0.25, 0.125, 0.0625]);
    }

    #[test]
    fn fixed_model_hard_stop_errors_past_length() {
        let m = FrequencyModel::parse("fixed:0.5,0.25;stop").unwrap();
        let mut stream = RandomStream::new(0);
        assert_eq!(draw_h(&m, 2, &mut stream).unwrap(), vec![0.5, 0.25]);
        assert!(matches!(
            draw_h(&m, 3, &mut stream),
            Err(Error::ModelExhausted { .. })
        ));
    }

    #[test]
    fn point_mass_gives_powers() {
        let m = FrequencyModel::iid(WDistribution::PointMass(0.3)).unwrap();
        let mut stream = RandomStream::new(0);
        let h = draw_h(&m, 3, &mut stream).unwrap();
        for (k, v) in h.iter().enumerate() {
            assert!((v - 0.3f64.powi(k as i32 + 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn paths_are_monotone_and_lazily_extended() {
        for model in [
            FrequencyModel::uniform_stick(),
            FrequencyModel::parse("iid:beta(2,3)").unwrap(),
            FrequencyModel::parse("indep-beta:a=1+0.5k,b=2").unwrap(),
            FrequencyModel::parse("gem:0.5,0.5").unwrap(),
        ] {
            let mut stream = RandomStream::new(11);
            let mut path = HPath::new(&model);
            path.ensure(5, &mut stream).unwrap();
            let first: Vec<f64> = path.realized_tail().to_vec();
            path.ensure(10, &mut stream).unwrap();
            // Extending did not redraw the old prefix.
            assert_eq!(&path.realized_tail()[..5], &first[..]);
            let h = path.realized();
            assert!(h.windows(2).all(|w| w[1] <= w[0] && w[1] >= 0.0));
            assert_eq!(h[0], 1.0);
        }
    }

    #[test]
    fn max_blocks_guard_fires() {
        let m = FrequencyModel::iid(WDistribution::PointMass(1.0)).unwrap();
        let mut path = HPath::with_max_blocks(&m, 16);
        let mut stream = RandomStream::new(0);
        assert!(matches!(
            path.ensure(17, &mut stream),
            Err(Error::MaxBlocks { limit: 16 })
        ));
    }

    #[test]
    fn log_moments_closed_forms() {
        let point = FrequencyModel::iid(WDistribution::PointMass(0.25)).unwrap();
        let lm = point.log_moments().unwrap();
        assert!((lm.mu - 4.0f64.ln()).abs() < 1e-15);
        assert_eq!(lm.sigma2, 0.0);

        let uniform = FrequencyModel::uniform_stick();
        let lm = uniform.log_moments().unwrap();
        assert_eq!((lm.mu, lm.sigma2), (1.0, 1.0));

        // Beta(2,3) in this density convention: mu = psi(5) - psi(3) = 7/12,
        // sigma2 = psi'(3) - psi'(5) = 25/144.
        let beta = FrequencyModel::parse("iid:beta(2,3)").unwrap();
        let lm = beta.log_moments().unwrap();
        assert!((lm.mu - 7.0 / 12.0).abs() < 1e-12);
        assert!((lm.sigma2 - 25.0 / 144.0).abs() < 1e-12);

        assert!(FrequencyModel::iid(WDistribution::PointMass(0.0))
            .unwrap()
            .log_moments()
            .is_err());
        assert!(FrequencyModel::parse("gem:0.5,0.5")
            .unwrap()
            .log_moments()
            .is_err());
    }

    /// Quadrature oracle for the log moments of a beta residual: integrate
    /// u^m exp(-b u) (1 - exp(-u))^(a-1) du over (0, inf), which is the
    /// substitution u = -log s applied to the beta density, divided by
    /// B(a, b). Adaptive Simpson on a truncated range.
    fn log_moment_quadrature(a: f64, b: f64, m: u32) -> f64 {
        use statrs::function::gamma::ln_gamma;
        let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        let f = |u: f64| -> f64 {
            if u <= 0.0 {
                return 0.0;
            }
            let ln_val = m as f64 * u.ln() - b * u + (a - 1.0) * (-(-u).exp()).ln_1p();
            (ln_val - ln_beta).exp()
        };
        // Seed the adaptive rule with uniform panels so the peak cannot be
        // missed on the wide range.
        let upper = 50.0 + 200.0 / b.min(1.0);
        let panels = 256;
        let w = (upper - 1e-14) / panels as f64;
        (0..panels)
            .map(|i| {
                let lo = 1e-14 + i as f64 * w;
                adaptive_simpson(&f, lo, lo + w, 1e-15, 40)
            })
            .sum()
    }

    fn adaptive_simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, eps: f64, depth: u32) -> f64 {
        fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
            (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
        }
        fn rec(
            f: &dyn Fn(f64) -> f64,
            a: f64,
            b: f64,
            whole: f64,
            eps: f64,
            depth: u32,
        ) -> f64 {
            let m = 0.5 * (a + b);
            let left = simpson(f, a, m);
            let right = simpson(f, m, b);
            if depth == 0 || (left + right - whole).abs() <= 15.0 * eps {
                left + right + (left + right - whole) / 15.0
            } else {
                rec(f, a, m, left, eps / 2.0, depth - 1)
                    + rec(f, m, b, right, eps / 2.0, depth - 1)
            }
        }
        rec(f, a, b, simpson(f, a, b), eps, depth)
    }

    #[test]
    fn log_moments_match_quadrature() {
        for (a, b) in [(2.0, 3.0), (1.0, 1.0), (0.5, 1.5), (3.5, 0.7)] {
            let model = FrequencyModel::iid(WDistribution::Beta { a, b }).unwrap();
            let lm = model.log_moments().unwrap();
            let m1 = log_moment_quadrature(a, b, 1);
            let m2 = log_moment_quadrature(a, b, 2);
            assert!(
                (lm.mu - m1).abs() < 1e-8,
                "mu mismatch for ({a},{b}): {} vs {m1}",
                lm.mu
            );
            assert!(
                (lm.sigma2 - (m2 - m1 * m1)).abs() < 1e-8,
                "sigma2 mismatch for ({a},{b}): {} vs {}",
                lm.sigma2,
                m2 - m1 * m1
            );
        }
    }

    #[test]
    fn iid_stick_log_walk_mean_matches_mu() {
        // -log H_k is a random walk; the empirical step mean must sit
        // within four standard errors of mu.
        let model = FrequencyModel::parse("iid:beta(2,3)").unwrap();
        let lm = model.log_moments().unwrap();
        let mut stream = RandomStream::new(99);
        let reps = 100_000usize;
        let mut sum = 0.0;
        for _ in 0..reps {
            let h = draw_h(&model, 1, &mut stream).unwrap();
            sum += -h[0].ln();
        }
        let mean = sum / reps as f64;
        let se = (lm.sigma2 / reps as f64).sqrt();
        assert!(
            (mean - lm.mu).abs() < 4.0 * se,
            "mean {mean} vs mu {} (se {se})",
            lm.mu
        );
    }

    #[test]
    fn empirical_h1_mean_for_uniform() {
        let model = FrequencyModel::uniform_stick();
        let mut stream = RandomStream::new(5);
        let reps = 1_000_000usize;
        let mut sum = 0.0;
        for _ in 0..reps {
            sum += draw_h(&model, 1, &mut stream).unwrap()[0];
        }
        let mean = sum / reps as f64;
        // H_1 is uniform: mean 1/2, sd 1/sqrt(12).
        let se = (1.0 / 12.0f64 / reps as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * se, "mean {mean}");
    }

    #[test]
    fn grammar_round_trips() {
        for s in [
            "fixed:0.5,0.25;geom=0.5",
            "fixed:0.5,0.25;stop",
            "iid:uniform",
            "iid:beta(2,3)",
            "iid:point(0.5)",
            "indep-beta:a=2,b=3",
            "indep-beta:a=0.5+0.5k,b=1",
            "gem:0.5,0.5",
        ] {
            let m = FrequencyModel::parse(s).unwrap();
            assert_eq!(FrequencyModel::parse(&m.to_string()).unwrap(), m);
        }
        assert!(FrequencyModel::parse("iid:gamma(1)").is_err());
        assert!(FrequencyModel::parse("fixed:0.5,0.7;stop").is_err());
        assert!(FrequencyModel::parse("gem:1.5,0").is_err());
        assert!(FrequencyModel::parse("nope:1").is_err());
    }

    #[test]
    fn two_parameter_residuals_follow_calibrated_mapping() {
        let m = FrequencyModel::two_parameter(0.5, 0.5).unwrap();
        let (a1, b1) = m.residual_beta_at(1).unwrap();
        let (a2, b2) = m.residual_beta_at(2).unwrap();
        assert_eq!((a1, b1), (0.5, 1.0));
        assert_eq!((a2, b2), (0.5, 1.5));
    }
}
