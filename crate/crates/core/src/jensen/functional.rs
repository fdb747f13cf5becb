use crate::entropy::{
    lieb_functional, lieb_pq_functional, relative_entropy, von_neumann_entropy, DensityMatrix,
    LiebParameters,
};
use crate::error::{Error, Result};
use crate::funcat::{parse_id, ScalarFunction};
use crate::linalg::{ComplexMatrix, PositiveMatrix, ToleranceConfig};
use crate::superop::{marechal_form, perspective_form, LeftRightPair};

/// Direction of the joint inequality being checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Convex,
    Concave,
}

/// Two-argument trace functional registered for joint convexity checks.
#[derive(Debug, Clone, PartialEq)]
pub enum Functional {
    /// `S(ρ‖σ)`, jointly convex on densities.
    RelEntropy,
    /// `−Trace ρ log ρ`, concave in its first argument.
    VnEntropy,
    /// `Trace A^s K* B^{1−s} K`, jointly concave.
    Lieb { s: f64 },
    /// `Trace A^q X* B^p X`, jointly concave.
    LiebPq(LiebParameters),
    /// `⟨g(L,R)(K), K⟩`
    Perspective(ScalarFunction),
    /// `⟨(fΔh)(L,R)(K), K⟩`
    Marechal(ScalarFunction, ScalarFunction),
}

impl Functional {
    /// Parses `rel_entropy`, `vn_entropy`, `lieb:s=<v>`, `lieb_pq:p=<v>,q=<v>`,
    /// `perspective[:<fn>]` or `marechal`. Missing parameters fall back to the
    /// supplied `s`, `p`, `q`, `f` and `h`.
    pub fn parse(
        id: &str,
        f: Option<&ScalarFunction>,
        h: Option<&ScalarFunction>,
        s: Option<f64>,
        p: Option<f64>,
        q: Option<f64>,
    ) -> Result<Self> {
        if let Some(rest) = id.strip_prefix("perspective") {
            let f = match rest.strip_prefix(':') {
                Some(fid) => ScalarFunction::parse(fid)?,
                None if rest.is_empty() => f
                    .cloned()
                    .ok_or_else(|| Error::Config("perspective functional requires a function".into()))?,
                None => return Err(Error::Parse(format!("unknown functional `{id}`"))),
            };
            return Ok(Functional::Perspective(f));
        }
        let (name, params) = parse_id(id)?;
        let param = |key: &str, fallback: Option<f64>| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| k == key)
                .map(|(_, v)| *v)
                .or(fallback)
                .ok_or_else(|| Error::Config(format!("functional `{name}` requires parameter `{key}`")))
        };
        let out = match name.as_str() {
            "rel_entropy" => Functional::RelEntropy,
            "vn_entropy" => Functional::VnEntropy,
            "lieb" => {
                let s = param("s", s)?;
                if !(s > 0.0 && s < 1.0) {
                    return Err(Error::Parameter(format!("lieb requires s in (0,1), got {s}")));
                }
                Functional::Lieb { s }
            }
            "lieb_pq" => Functional::LiebPq(LiebParameters::new(param("p", p)?, param("q", q)?)?),
            "marechal" => {
                let f = f.ok_or_else(|| Error::Config("marechal functional requires --fn".into()))?;
                let h = h.ok_or_else(|| Error::Config("marechal functional requires --h-fn".into()))?;
                Functional::Marechal(f.clone(), h.clone())
            }
            other => return Err(Error::Parse(format!("unknown functional `{other}`"))),
        };
        Ok(out)
    }

    pub fn id(&self) -> String {
        match self {
            Functional::RelEntropy => "rel_entropy".into(),
            Functional::VnEntropy => "vn_entropy".into(),
            Functional::Lieb { s } => format!("lieb:s={s}"),
            Functional::LiebPq(p) => format!("lieb_pq:p={},q={}", p.p(), p.q()),
            Functional::Perspective(f) => format!("perspective:{}", f.id()),
            Functional::Marechal(..) => "marechal".into(),
        }
    }

    /// Whether inputs must be unit-trace densities.
    pub fn wants_density(&self) -> bool {
        matches!(self, Functional::RelEntropy | Functional::VnEntropy)
    }

    pub fn sense(&self) -> Result<Sense> {
        match self {
            Functional::RelEntropy => Ok(Sense::Convex),
            Functional::VnEntropy | Functional::Lieb { .. } | Functional::LiebPq(_) => Ok(Sense::Concave),
            Functional::Perspective(f) => {
                let class = f.op_class();
                if class.is_convex() {
                    Ok(Sense::Convex)
                } else if class.is_concave() {
                    Ok(Sense::Concave)
                } else {
                    Err(Error::Config(format!(
                        "{f} is {}; joint convexity of its perspective is not asserted",
                        class.as_str()
                    )))
                }
            }
            Functional::Marechal(f, h) => {
                if !f.op_class().is_convex() || !h.op_class().is_concave() {
                    return Err(Error::Config(format!(
                        "marechal perspective needs operator convex f and operator concave h (got {f}, {h})"
                    )));
                }
                match f.value_at_zero() {
                    Some(v) if v <= 0.0 => Ok(Sense::Convex),
                    _ => Err(Error::Config(format!("marechal perspective needs f(0) <= 0 (got {f})"))),
                }
            }
        }
    }

    /// Value at the pair `(a, b)`; `k` is the auxiliary matrix where one is
    /// used.
    pub fn eval(&self, a: &PositiveMatrix, b: &PositiveMatrix, k: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<f64> {
        match self {
            Functional::RelEntropy => {
                let rho = DensityMatrix::new(a.clone())?;
                let sigma = DensityMatrix::new(b.clone())?;
                relative_entropy(&rho, &sigma, cfg)
            }
            Functional::VnEntropy => von_neumann_entropy(&DensityMatrix::new(a.clone())?, cfg),
            Functional::Lieb { s } => lieb_functional(a, b, k, *s, cfg),
            Functional::LiebPq(params) => lieb_pq_functional(a, b, k, params, cfg),
            Functional::Perspective(f) => {
                let pair = LeftRightPair::with_config(a.clone(), b.clone(), cfg)?;
                perspective_form(f, &pair, k, cfg)
            }
            Functional::Marechal(f, h) => {
                let pair = LeftRightPair::with_config(a.clone(), b.clone(), cfg)?;
                marechal_form(f, h, &pair, k, cfg)
            }
        }
    }
}
