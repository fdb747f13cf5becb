//! Catalog of scalar functions with operator-convexity metadata, the shift
//! reduction `F(t) = f(t+c) − f(c)`, and classical (commutative) perspective
//! and entropy baselines.
//!
//! Function identifiers are `name` or `name:key=value,key=value`, for example
//! `xlogx`, `neg_power:s=0.5`, `power:t=0.3`, `affine:a=1,b=2`.

use std::fmt;

use crate::error::{Error, Result};

/// Real interval with open/closed endpoint flags; infinite endpoints are open.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub lo_closed: bool,
    pub hi: f64,
    pub hi_closed: bool,
}

impl Interval {
    pub const REAL: Interval = Interval {
        lo: f64::NEG_INFINITY,
        lo_closed: false,
        hi: f64::INFINITY,
        hi_closed: false,
    };
    pub const NONNEG: Interval = Interval {
        lo: 0.0,
        lo_closed: true,
        hi: f64::INFINITY,
        hi_closed: false,
    };
    pub const POSITIVE: Interval = Interval {
        lo: 0.0,
        lo_closed: false,
        hi: f64::INFINITY,
        hi_closed: false,
    };

    pub fn contains(&self, x: f64) -> bool {
        let above = if self.lo_closed { x >= self.lo } else { x > self.lo };
        let below = if self.hi_closed { x <= self.hi } else { x < self.hi };
        above && below
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    pub fn translate(&self, by: f64) -> Interval {
        Interval {
            lo: self.lo + by,
            hi: self.hi + by,
            ..*self
        }
    }

    /// True when the domain is bounded below (the samplers then draw
    /// positive matrices).
    pub fn bounded_below(&self) -> bool {
        self.lo.is_finite()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = if self.lo_closed { '[' } else { '(' };
        let close = if self.hi_closed { ']' } else { ')' };
        let show = |x: f64| {
            if x == f64::INFINITY {
                "∞".to_string()
            } else if x == f64::NEG_INFINITY {
                "−∞".to_string()
            } else {
                format!("{x}")
            }
        };
        write!(f, "{open}{}, {}{close}", show(self.lo), show(self.hi))
    }
}

/// Operator-convexity class. Trusted metadata; the verification suites
/// audit it empirically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpClass {
    OperatorConvex,
    OperatorConcave,
    /// Affine functions are both operator convex and operator concave.
    Affine,
    NotOperatorConvex,
    Unclassified,
}

impl OpClass {
    pub fn is_convex(self) -> bool {
        matches!(self, OpClass::OperatorConvex | OpClass::Affine)
    }

    pub fn is_concave(self) -> bool {
        matches!(self, OpClass::OperatorConcave | OpClass::Affine)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            OpClass::OperatorConvex => "operator-convex",
            OpClass::OperatorConcave => "operator-concave",
            OpClass::Affine => "affine",
            OpClass::NotOperatorConvex => "not-operator-convex",
            OpClass::Unclassified => "unclassified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    XLogX,
    /// `−x^s`, `s ∈ (0,1)`
    NegPower(f64),
    /// `x^t`, `t > 0`
    Power(f64),
    Log,
    NegLog,
    Inverse,
    Square,
    Quartic,
    Exp,
    Identity,
    /// `a + b·x`
    Affine(f64, f64),
    Constant(f64),
    /// `F(t) = f(t+c) − f(c)`
    Shifted(Box<ScalarFunction>, f64),
}

/// A catalog entry: evaluator, domain, value at zero and convexity class.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFunction {
    kind: Kind,
    domain: Interval,
    value_at_zero: Option<f64>,
    op_class: OpClass,
}

impl ScalarFunction {
    fn build(kind: Kind) -> Self {
        use Kind::*;
        let (domain, op_class) = match &kind {
            XLogX => (Interval::NONNEG, OpClass::OperatorConvex),
            NegPower(_) => (Interval::NONNEG, OpClass::OperatorConvex),
            Power(t) => {
                let class = if *t < 1.0 {
                    OpClass::OperatorConcave
                } else if *t == 1.0 {
                    OpClass::Affine
                } else if *t <= 2.0 {
                    OpClass::OperatorConvex
                } else {
                    OpClass::NotOperatorConvex
                };
                (Interval::NONNEG, class)
            }
            Log => (Interval::POSITIVE, OpClass::OperatorConcave),
            NegLog => (Interval::POSITIVE, OpClass::OperatorConvex),
            Inverse => (Interval::POSITIVE, OpClass::OperatorConvex),
            Square => (Interval::REAL, OpClass::OperatorConvex),
            Quartic => (Interval::REAL, OpClass::NotOperatorConvex),
            Exp => (Interval::REAL, OpClass::NotOperatorConvex),
            Identity | Affine(..) | Constant(_) => (Interval::REAL, OpClass::Affine),
            Shifted(base, c) => (base.domain.translate(-c), base.op_class),
        };
        let mut f = ScalarFunction {
            kind,
            domain,
            value_at_zero: None,
            op_class,
        };
        if domain.contains(0.0) {
            f.value_at_zero = Some(f.raw(0.0));
        }
        f
    }

    pub fn xlogx() -> Self {
        Self::build(Kind::XLogX)
    }

    /// `−x^s` for `s ∈ (0,1)`; endpoints are rejected.
    pub fn neg_power(s: f64) -> Result<Self> {
        if !(s > 0.0 && s < 1.0) {
            return Err(Error::Parameter(format!("neg_power requires s in (0,1), got {s}")));
        }
        Ok(Self::build(Kind::NegPower(s)))
    }

    /// `x^t` on `[0,∞)` for `t > 0`.
    pub fn power(t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Parameter(format!("power requires t > 0, got {t}")));
        }
        Ok(Self::build(Kind::Power(t)))
    }

    pub fn log() -> Self {
        Self::build(Kind::Log)
    }

    pub fn neg_log() -> Self {
        Self::build(Kind::NegLog)
    }

    pub fn inverse() -> Self {
        Self::build(Kind::Inverse)
    }

    pub fn square() -> Self {
        Self::build(Kind::Square)
    }

    pub fn quartic() -> Self {
        Self::build(Kind::Quartic)
    }

    pub fn exp() -> Self {
        Self::build(Kind::Exp)
    }

    pub fn identity() -> Self {
        Self::build(Kind::Identity)
    }

    pub fn affine(a: f64, b: f64) -> Self {
        Self::build(Kind::Affine(a, b))
    }

    pub fn constant(c: f64) -> Self {
        Self::build(Kind::Constant(c))
    }

    /// Parses an identifier such as `neg_power:s=0.5`.
    pub fn parse(id: &str) -> Result<Self> {
        let (name, params) = parse_id(id)?;
        let get = |key: &str| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("function `{name}` requires parameter `{key}`")))
        };
        let allow = |keys: &[&str]| -> Result<()> {
            match params.iter().find(|(k, _)| !keys.contains(&k.as_str())) {
                Some((k, _)) => Err(Error::Parse(format!("unknown parameter `{k}` for `{name}`"))),
                None => Ok(()),
            }
        };
        let f = match name.as_str() {
            "xlogx" => Self::xlogx(),
            "neg_power" => {
                allow(&["s"])?;
                Self::neg_power(get("s")?)?
            }
            "power" => {
                allow(&["t", "s"])?;
                Self::power(get("t").or_else(|_| get("s"))?)?
            }
            "log" => Self::log(),
            "neg_log" => Self::neg_log(),
            "inverse" => Self::inverse(),
            "square" => Self::square(),
            "quartic" => Self::quartic(),
            "exp" => Self::exp(),
            "identity" => Self::identity(),
            "affine" => {
                allow(&["a", "b"])?;
                Self::affine(get("a")?, get("b")?)
            }
            "const" => {
                allow(&["c"])?;
                Self::constant(get("c")?)
            }
            other => return Err(Error::Parse(format!("unknown function `{other}`"))),
        };
        if !matches!(name.as_str(), "neg_power" | "power" | "affine" | "const") && !params.is_empty() {
            return Err(Error::Parse(format!("function `{name}` takes no parameters")));
        }
        Ok(f)
    }

    /// Canonical identifier; round-trips through [`ScalarFunction::parse`]
    /// except for shifted functions.
    pub fn id(&self) -> String {
        match &self.kind {
            Kind::XLogX => "xlogx".into(),
            Kind::NegPower(s) => format!("neg_power:s={s}"),
            Kind::Power(t) => format!("power:t={t}"),
            Kind::Log => "log".into(),
            Kind::NegLog => "neg_log".into(),
            Kind::Inverse => "inverse".into(),
            Kind::Square => "square".into(),
            Kind::Quartic => "quartic".into(),
            Kind::Exp => "exp".into(),
            Kind::Identity => "identity".into(),
            Kind::Affine(a, b) => format!("affine:a={a},b={b}"),
            Kind::Constant(c) => format!("const:c={c}"),
            Kind::Shifted(base, c) => format!("shift[c={c}]({})", base.id()),
        }
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn value_at_zero(&self) -> Option<f64> {
        self.value_at_zero
    }

    pub fn op_class(&self) -> OpClass {
        self.op_class
    }

    fn raw(&self, x: f64) -> f64 {
        match &self.kind {
            Kind::XLogX => {
                if x == 0.0 {
                    0.0
                } else {
                    x * x.ln()
                }
            }
            Kind::NegPower(s) => {
                if x == 0.0 {
                    0.0
                } else {
                    -x.powf(*s)
                }
            }
            Kind::Power(t) => x.powf(*t),
            Kind::Log => x.ln(),
            Kind::NegLog => -x.ln(),
            Kind::Inverse => 1.0 / x,
            Kind::Square => x * x,
            Kind::Quartic => (x * x) * (x * x),
            Kind::Exp => x.exp(),
            Kind::Identity => x,
            Kind::Affine(a, b) => a + b * x,
            Kind::Constant(c) => *c,
            Kind::Shifted(base, c) => base.raw(x + c) - base.raw(*c),
        }
    }

    fn domain_error(&self, x: f64) -> Error {
        Error::Domain {
            function: self.id(),
            value: x,
            domain: self.domain.to_string(),
        }
    }

    /// Pointwise value; `x` must lie in the domain.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !self.domain.contains(x) {
            return Err(self.domain_error(x));
        }
        if x == 0.0 {
            if let Some(v) = self.value_at_zero {
                return Ok(v);
            }
        }
        Ok(self.raw(x))
    }

    /// Value at an eigenvalue. Within `floor` of an open endpoint is an
    /// error; undershooting a closed endpoint by at most `slack` clamps.
    pub fn eval_spectral(&self, x: f64, floor: f64, slack: f64) -> Result<f64> {
        let d = self.domain;
        let mut y = x;
        if d.lo.is_finite() {
            if d.lo_closed {
                if x < d.lo - slack {
                    return Err(self.domain_error(x));
                }
                y = y.max(d.lo);
            } else if x <= d.lo + floor {
                return Err(self.domain_error(x));
            }
        }
        if d.hi.is_finite() {
            if d.hi_closed {
                if x > d.hi + slack {
                    return Err(self.domain_error(x));
                }
                y = y.min(d.hi);
            } else if x >= d.hi - floor {
                return Err(self.domain_error(x));
            }
        }
        if !x.is_finite() {
            return Err(self.domain_error(x));
        }
        self.eval(y)
    }

    /// `F(t) = f(t+c) − f(c)` on the domain translated by `−c`.
    pub fn shift_reduce(&self, c: f64) -> Result<ScalarFunction> {
        if !self.domain.contains(c) {
            return Err(self.domain_error(c));
        }
        Ok(Self::build(Kind::Shifted(Box::new(self.clone()), c)))
    }
}

impl fmt::Display for ScalarFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

/// Splits `name:k=v,k=v` into its name and parameter list.
pub fn parse_id(id: &str) -> Result<(String, Vec<(String, f64)>)> {
    let id = id.trim();
    let (name, rest) = match id.split_once(':') {
        Some((n, r)) => (n, Some(r)),
        None => (id, None),
    };
    if name.is_empty() {
        return Err(Error::Parse("empty identifier".into()));
    }
    let mut params = Vec::new();
    if let Some(rest) = rest {
        for part in rest.split(',') {
            let (k, v) = part
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("malformed parameter `{part}` in `{id}`")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("parameter `{k}` is not a number: `{v}`")))?;
            if !v.is_finite() {
                return Err(Error::Parse(format!("parameter `{k}` must be finite")));
            }
            params.push((k.trim().to_string(), v));
        }
    }
    Ok((name.to_string(), params))
}

/// Default catalog used by the verification suites.
pub fn catalog() -> Vec<ScalarFunction> {
    vec![
        ScalarFunction::xlogx(),
        ScalarFunction::neg_power(0.5).expect("valid"),
        ScalarFunction::power(0.5).expect("valid"),
        ScalarFunction::power(1.5).expect("valid"),
        ScalarFunction::log(),
        ScalarFunction::neg_log(),
        ScalarFunction::inverse(),
        ScalarFunction::square(),
        ScalarFunction::identity(),
        ScalarFunction::affine(1.0, 2.0),
        ScalarFunction::quartic(),
        ScalarFunction::exp(),
    ]
}

/// Looks up a catalog entry (or any parseable identifier).
pub fn lookup(id: &str) -> Result<ScalarFunction> {
    ScalarFunction::parse(id)
}

/// Probability vector with strictly positive entries summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector(Vec<f64>);

impl ProbabilityVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Parameter("empty probability vector".into()));
        }
        if entries.iter().any(|p| !(*p > 0.0) || !p.is_finite()) {
            return Err(Error::Parameter("probabilities must be strictly positive".into()));
        }
        let total: f64 = entries.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Parameter(format!("probabilities sum to {total}, not 1")));
        }
        Ok(ProbabilityVector(entries))
    }

    pub fn entries(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// `g(x,t) = f(x/t)·t`
pub fn classical_perspective(f: &ScalarFunction, x: f64, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Domain {
            function: format!("perspective of {}", f.id()),
            value: t,
            domain: "t > 0".into(),
        });
    }
    Ok(f.eval(x / t)? * t)
}

/// `H(p) = −Σ p_i ln p_i` in nats.
pub fn classical_entropy(p: &ProbabilityVector) -> f64 {
    -p.0.iter().map(|&x| x * x.ln()).sum::<f64>()
}

/// `Σ p_i ln p_i − p_i ln q_i`: divergence of `p` (first argument) from `q`.
pub fn classical_relative_entropy(p: &ProbabilityVector, q: &ProbabilityVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    Ok(p.0
        .iter()
        .zip(&q.0)
        .map(|(&pi, &qi)| pi * pi.ln() - pi * qi.ln())
        .sum())
}
