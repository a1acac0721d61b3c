//! Domain types: trajectories, demonstrations, and dataset containers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Whether a demonstration executes the forward task or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Forward,
    Inverse,
}

impl core::fmt::Display for Role {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Role::Forward => write!(f, "forward"),
            Role::Inverse => write!(f, "inverse"),
        }
    }
}

/// Affine-map raw timestamps onto [0, 1], preserving order.
///
/// The first element maps to exactly 0 and the last to exactly 1.
pub fn normalize_time<T: Scalar>(raw_times: &[T]) -> Result<Vec<T>> {
    if raw_times.len() < 2 {
        return Err(Error::InvalidTrajectory(format!(
            "need at least 2 timestamps, got {}",
            raw_times.len()
        )));
    }
    if !raw_times.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::InvalidTrajectory(
            "timestamps must be strictly increasing".into(),
        ));
    }
    let t0 = raw_times[0];
    let span = *raw_times.last().unwrap() - t0;
    Ok(raw_times.iter().map(|&t| (t - t0) / span).collect())
}

/// One sensorimotor trajectory: normalized timestamps plus a `T x d_y` value
/// matrix, one row per timestep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<T> {
    /// Normalized timestamps in [0, 1], strictly increasing, endpoints 0 and 1.
    pub times: Vec<T>,
    /// Sensorimotor readings, one row per timestamp.
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> Trajectory<T> {
    /// Build from raw (possibly unnormalized) timestamps; time is normalized
    /// to [0, 1]. Fails if timestamps are non-increasing, fewer than 2 points
    /// are given, or value rows have inconsistent widths.
    pub fn new(raw_times: Vec<T>, values: Vec<Vec<T>>) -> Result<Self> {
        let times = normalize_time(&raw_times)?;
        Self::check_values(&times, &values)?;
        Ok(Self { times, values })
    }

    /// Build from timestamps that are already normalized; validates instead of
    /// remapping, so loaded data round-trips bit-exactly.
    pub fn from_normalized(times: Vec<T>, values: Vec<Vec<T>>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidTrajectory(format!(
                "need at least 2 timestamps, got {}",
                times.len()
            )));
        }
        if !times.windows(2).all(|w| w[0] < w[1]) {
            return Err(Error::InvalidTrajectory(
                "timestamps must be strictly increasing".into(),
            ));
        }
        if times[0] != T::zero() || *times.last().unwrap() != T::one() {
            return Err(Error::InvalidTrajectory(
                "normalized timestamps must start at 0 and end at 1".into(),
            ));
        }
        Self::check_values(&times, &values)?;
        Ok(Self { times, values })
    }

    fn check_values(times: &[T], values: &[Vec<T>]) -> Result<()> {
        if times.len() != values.len() {
            return Err(Error::InvalidTrajectory(format!(
                "{} timestamps but {} value rows",
                times.len(),
                values.len()
            )));
        }
        let width = values[0].len();
        if values.iter().any(|row| row.len() != width) {
            return Err(Error::InvalidTrajectory(
                "value rows have inconsistent widths".into(),
            ));
        }
        if values.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidTrajectory(
                "values must be finite".into(),
            ));
        }
        Ok(())
    }

    /// Number of timesteps.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Width of one sensorimotor reading (d_y).
    pub fn dim(&self) -> usize {
        self.values[0].len()
    }
}

/// One demonstration: a trajectory plus its task parameter and the
/// environment states before and after execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Demonstration<T> {
    pub role: Role,
    /// Task parameter vector (psi).
    pub psi: Vec<T>,
    pub s_init: Vec<T>,
    pub s_final: Vec<T>,
    #[serde(rename = "t")]
    pub times: Vec<T>,
    #[serde(rename = "y")]
    pub values: Vec<Vec<T>>,
}

impl<T: Scalar> Demonstration<T> {
    pub fn new(
        role: Role,
        psi: Vec<T>,
        s_init: Vec<T>,
        s_final: Vec<T>,
        trajectory: Trajectory<T>,
    ) -> Result<Self> {
        if s_init.len() != s_final.len() {
            return Err(Error::DimMismatch {
                expected: s_init.len(),
                got: s_final.len(),
            });
        }
        Ok(Self {
            role,
            psi,
            s_init,
            s_final,
            times: trajectory.times,
            values: trajectory.values,
        })
    }

    /// View of the demonstration's trajectory.
    pub fn trajectory(&self) -> Trajectory<T> {
        Trajectory {
            times: self.times.clone(),
            values: self.values.clone(),
        }
    }

    /// Validate all type invariants; used on load.
    pub fn validate(&self) -> Result<()> {
        Trajectory::from_normalized(self.times.clone(), self.values.clone())?;
        if self.s_init.len() != self.s_final.len() {
            return Err(Error::DimMismatch {
                expected: self.s_init.len(),
                got: self.s_final.len(),
            });
        }
        Ok(())
    }

    pub fn d_y(&self) -> usize {
        self.values[0].len()
    }

    pub fn d_psi(&self) -> usize {
        self.psi.len()
    }

    pub fn d_s(&self) -> usize {
        self.s_init.len()
    }
}

/// A list of demonstrations with shared dimensions, as stored on disk.
#[derive(Debug, Clone, PartialEq)]
pub struct DemoSet<T> {
    pub d_y: usize,
    pub d_psi: usize,
    pub d_s: usize,
    pub demos: Vec<Demonstration<T>>,
}

impl<T: Scalar> DemoSet<T> {
    /// Wrap demonstrations, deriving dimensions from the first one and
    /// requiring every entry to agree.
    pub fn new(demos: Vec<Demonstration<T>>) -> Result<Self> {
        let (d_y, d_psi, d_s) = match demos.first() {
            Some(d) => (d.d_y(), d.d_psi(), d.d_s()),
            None => (0, 0, 0),
        };
        for d in &demos {
            if d.d_y() != d_y {
                return Err(Error::DimMismatch { expected: d_y, got: d.d_y() });
            }
            if d.d_psi() != d_psi {
                return Err(Error::DimMismatch { expected: d_psi, got: d.d_psi() });
            }
            if d.d_s() != d_s {
                return Err(Error::DimMismatch { expected: d_s, got: d.d_s() });
            }
        }
        Ok(Self { d_y, d_psi, d_s, demos })
    }

    pub fn len(&self) -> usize {
        self.demos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demos.is_empty()
    }
}

/// Bijectively matched forward/inverse demonstration pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedDataset<T> {
    pub pairs: Vec<(Demonstration<T>, Demonstration<T>)>,
    /// Sum of per-pair Euclidean distances between `forward.s_final` and
    /// `inverse.s_init`.
    pub pairing_cost: T,
}

impl<T: Scalar> PairedDataset<T> {
    /// Build from explicit pairs; the pairing cost is recomputed from the
    /// environment states so the stored total always satisfies the invariant.
    pub fn from_pairs(pairs: Vec<(Demonstration<T>, Demonstration<T>)>) -> Result<Self> {
        let mut total = T::zero();
        for (f, i) in &pairs {
            if f.role != Role::Forward {
                return Err(Error::RoleError("pair left element must be forward".into()));
            }
            if i.role != Role::Inverse {
                return Err(Error::RoleError("pair right element must be inverse".into()));
            }
            total += pair_cost(f, i)?;
        }
        Ok(Self { pairs, pairing_cost: total })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Distance between a forward demonstration's final state and an inverse
/// demonstration's initial state.
pub fn pair_cost<T: Scalar>(forward: &Demonstration<T>, inverse: &Demonstration<T>) -> Result<T> {
    euclidean_distance(&forward.s_final, &inverse.s_init)
}

/// Plain Euclidean distance, summed in index order.
pub fn euclidean_distance<T: Scalar>(a: &[T], b: &[T]) -> Result<T> {
    if a.len() != b.len() {
        return Err(Error::DimMismatch { expected: a.len(), got: b.len() });
    }
    let mut acc = T::zero();
    for (&x, &y) in a.iter().zip(b) {
        let d = x - y;
        acc += d * d;
    }
    Ok(acc.sqrt())
}

/// Extra forward-only demonstrations without inverse counterparts.
#[derive(Debug, Clone, PartialEq)]
pub struct AuxiliaryDataset<T> {
    pub demos: Vec<Demonstration<T>>,
}

impl<T: Scalar> AuxiliaryDataset<T> {
    /// Wrap forward demonstrations; rejects any inverse entry.
    pub fn new(demos: Vec<Demonstration<T>>) -> Result<Self> {
        if let Some(pos) = demos.iter().position(|d| d.role != Role::Forward) {
            return Err(Error::RoleError(format!(
                "auxiliary demo {pos} has role inverse"
            )));
        }
        Ok(Self { demos })
    }

    pub fn len(&self) -> usize {
        self.demos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demos.is_empty()
    }
}

/// Per-query Gaussian prediction: mean and standard deviation per output
/// dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPrediction<T> {
    pub mean: Vec<T>,
    pub std: Vec<T>,
}

impl<T: Scalar> GaussianPrediction<T> {
    pub fn new(mean: Vec<T>, std: Vec<T>) -> Result<Self> {
        if mean.len() != std.len() {
            return Err(Error::DimMismatch { expected: mean.len(), got: std.len() });
        }
        if let Some(bad) = std.iter().find(|s| !(**s > T::zero())) {
            return Err(Error::InvalidStd(format!("{bad}")));
        }
        Ok(Self { mean, std })
    }
}
