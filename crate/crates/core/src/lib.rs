//! Cluster variables of type A cluster algebras with boundary coefficients.
//!
//! The numerator `f^[i,j]` of every non-initial cluster variable can be
//! computed five ways: perfect matchings of angles, maximal discrete arrow
//! subsets, minimal cuts of a quiver with potential, perfect matchings of a
//! snake graph, and brute-force seed mutation.

pub mod cluster;
pub mod geometry;
pub mod laurent;
pub mod matchings;
pub mod qp;
pub mod quiver;
pub mod snake;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use cluster::{numerator_table, ClusterError};
use geometry::{GeometryError, Triangulation};
use laurent::{LaurentError, LaurentPoly};
use matchings::MatchingsError;
use qp::QpError;
use quiver::{quiver_of_triangulation, QuiverError, QuiverMode};
use snake::SnakeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Quiver(#[from] QuiverError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Cluster(#[from] ClusterError),
    #[error(transparent)]
    Matchings(#[from] MatchingsError),
    #[error(transparent)]
    Snake(#[from] SnakeError),
    #[error(transparent)]
    Qp(#[from] QpError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Severity {
    /// The caller supplied something invalid.
    Input,
    /// A mathematical invariant failed; the computation cannot be trusted.
    Internal,
}

fn laurent_severity(e: &LaurentError) -> Severity {
    match e {
        LaurentError::NotDivisible { .. } | LaurentError::ExponentOverflow => Severity::Internal,
        _ => Severity::Input,
    }
}

fn quiver_severity(e: &QuiverError) -> Severity {
    match e {
        QuiverError::UnmarkedCorner { .. } => Severity::Internal,
        _ => Severity::Input,
    }
}

impl Error {
    pub fn severity(&self) -> Severity {
        match self {
            Error::Geometry(_) => Severity::Input,
            Error::Quiver(e) => quiver_severity(e),
            Error::Laurent(e) => laurent_severity(e),
            Error::Cluster(e) => match e {
                ClusterError::Laurent(e) => laurent_severity(e),
                ClusterError::Quiver(e) => quiver_severity(e),
                ClusterError::MutableNotInitial(_) => Severity::Input,
                ClusterError::LimitExceeded { .. } | ClusterError::MalformedDenominator(_) => {
                    Severity::Internal
                }
            },
            Error::Matchings(e) => match e {
                MatchingsError::Geometry(_) | MatchingsError::SizeLimit { .. } => Severity::Input,
                MatchingsError::Quiver(e) => quiver_severity(e),
                MatchingsError::Laurent(e) => laurent_severity(e),
                MatchingsError::VerificationFailed(_) => Severity::Internal,
            },
            Error::Snake(e) => match e {
                SnakeError::Geometry(_) => Severity::Input,
                SnakeError::Laurent(e) => laurent_severity(e),
                SnakeError::VerificationFailed(_) => Severity::Internal,
            },
            Error::Qp(e) => match e {
                QpError::Geometry(_) | QpError::SizeLimit { .. } => Severity::Input,
                QpError::Laurent(e) => laurent_severity(e),
                QpError::VerificationFailed(_) => Severity::Internal,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Angles,
    Discrete,
    Cuts,
    Snake,
    Oracle,
}

impl Method {
    pub const ALL: [Method; 5] = [
        Method::Angles,
        Method::Discrete,
        Method::Cuts,
        Method::Snake,
        Method::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Angles => "angles",
            Method::Discrete => "discrete",
            Method::Cuts => "cuts",
            Method::Snake => "snake",
            Method::Oracle => "oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Method, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| format!("unknown method {s:?}"))
    }
}

/// `f^[i,j]` by the chosen method. `seed_limit` only affects the oracle.
pub fn expand(
    t: &Triangulation,
    i: usize,
    j: usize,
    method: Method,
    seed_limit: Option<usize>,
) -> Result<LaurentPoly, Error> {
    Ok(match method {
        Method::Angles => matchings::angle_formula(t, i, j)?,
        Method::Discrete => matchings::discrete_formula(t, i, j)?,
        Method::Cuts => qp::cut_formula(t, i, j)?,
        Method::Snake => snake::ms_formula(t, i, j)?,
        Method::Oracle => {
            t.subpolygon(i, j)?;
            let q = quiver_of_triangulation(t, QuiverMode::Ice);
            let table = numerator_table(&q, seed_limit)?;
            table
                .get(i, j)
                .cloned()
                .expect("the table covers every interval")
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use geometry::Orientation;

    #[test]
    fn every_method_agrees_on_the_fan() {
        let t = Triangulation::from_orientation(3, &[Orientation::Forward; 2]).unwrap();
        let expected = "x1*x2*x4*x8 + x1*x4*x7*x9 + x2*x3*x5*x9 + x3*x4*x6*x9";
        for m in Method::ALL {
            assert_eq!(
                expand(&t, 1, 3, m, None).unwrap().to_string(),
                expected,
                "{m}"
            );
        }
    }

    #[test]
    fn severities() {
        let t = Triangulation::from_orientation(2, &[Orientation::Forward]).unwrap();
        let e = expand(&t, 1, 3, Method::Angles, None).unwrap_err();
        assert_eq!(e.severity(), Severity::Input);
        let e = expand(&t, 1, 3, Method::Oracle, None).unwrap_err();
        assert_eq!(e.severity(), Severity::Input);
        let e: Error = LaurentError::NotDivisible {
            dividend: "x1".into(),
            divisor: "x2".into(),
        }
        .into();
        assert_eq!(e.severity(), Severity::Internal);
        let e = expand(&t, 1, 2, Method::Oracle, Some(2)).unwrap_err();
        assert_eq!(e.severity(), Severity::Internal);
        assert_eq!("cuts".parse::<Method>(), Ok(Method::Cuts));
        assert!("nope".parse::<Method>().is_err());
    }
}
