use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::privacy::ProblemConstants;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// MNIST digits 3 vs 8.
    Mnist38,
    Cifar10Binary,
    Cifar10Multi,
    /// Gaussian clusters generated on the fly.
    Synthetic,
}

/// Problem scale and privacy parameter of a preset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetSpec {
    pub n: usize,
    pub dim: usize,
    pub classes: u32,
    pub reg: f64,
    pub delta: f64,
}

impl Preset {
    pub const ALL: [Preset; 4] = [
        Preset::Mnist38,
        Preset::Cifar10Binary,
        Preset::Cifar10Multi,
        Preset::Synthetic,
    ];

    pub fn spec(self) -> PresetSpec {
        match self {
            Preset::Mnist38 => PresetSpec {
                n: 11982,
                dim: 724,
                classes: 2,
                reg: 0.0119,
                delta: 8.3458e-5,
            },
            Preset::Cifar10Binary => PresetSpec {
                n: 10000,
                dim: 512,
                classes: 2,
                reg: 0.01,
                delta: 1e-4,
            },
            Preset::Cifar10Multi => PresetSpec {
                n: 50000,
                dim: 512,
                classes: 10,
                reg: 0.0499,
                delta: 2e-5,
            },
            Preset::Synthetic => PresetSpec {
                n: 2000,
                dim: 20,
                classes: 2,
                reg: 1e-6 * 2000.0,
                delta: 1.0 / 2000.0,
            },
        }
    }

    /// Logistic (binary) or softmax (multiclass) constants at this scale.
    pub fn constants(self, radius: f64) -> Result<ProblemConstants> {
        let s = self.spec();
        if s.classes == 2 {
            ProblemConstants::binary_logistic(s.n, s.dim, s.reg, radius)
        } else {
            ProblemConstants::multiclass_logistic(s.n, s.dim, s.reg, radius)
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Preset::Mnist38 => "mnist38",
            Preset::Cifar10Binary => "cifar10-binary",
            Preset::Cifar10Multi => "cifar10-multi",
            Preset::Synthetic => "synthetic",
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown preset {s:?}; expected one of mnist38, cifar10-binary, cifar10-multi, synthetic")))
    }
}

/// Targets of the published one-step calibration table.
pub const TABLE_TARGETS: [f64; 6] = [0.05, 0.1, 0.5, 1.0, 2.0, 5.0];

/// Published noise levels reaching each of [`TABLE_TARGETS`] with one
/// unlearning step and a single removed point.
pub fn reference_sigma_table(preset: Preset) -> Option<[f64; 6]> {
    match preset {
        Preset::Mnist38 => Some([0.1872, 0.094, 0.0190, 0.0096, 0.0049, 0.0021]),
        Preset::Cifar10Binary => Some([0.2431, 0.1220, 0.0250, 0.0125, 0.0064, 0.0028]),
        Preset::Cifar10Multi => Some([0.0473, 0.0238, 0.0049, 0.0025, 0.0012, 0.0005]),
        Preset::Synthetic => None,
    }
}

/// Published D2D noise levels (internal-state variant) for `I ∈ {1, 2, 5}`
/// at each of [`TABLE_TARGETS`].
pub fn reference_d2d_table(preset: Preset) -> Option<[(u64, [f64; 6]); 3]> {
    match preset {
        Preset::Mnist38 => Some([
            (1, [36.8573, 18.4620, 3.7310, 1.8890, 0.9673, 0.4120]),
            (2, [17.3030, 8.6229, 1.7507, 0.8864, 0.4538, 0.1933]),
            (5, [5.6774, 2.8424, 0.5744, 0.2908, 0.1489, 0.0634]),
        ]),
        Preset::Cifar10Binary => Some([
            (1, [59.5184, 29.7994, 6.0233, 3.0504, 1.5626, 0.6663]),
            (2, [28.1340, 14.0859, 2.8472, 1.4419, 0.7386, 0.3149]),
            (5, [9.4523, 4.7325, 0.9565, 0.4844, 0.2481, 0.1058]),
        ]),
        Preset::Cifar10Multi => Some([
            (1, [5.9612, 2.9840, 0.6022, 0.3044, 0.1554, 0.0657]),
            (2, [2.8386, 1.4209, 0.2867, 0.1449, 0.0740, 0.0313]),
            (5, [0.9764, 0.4887, 0.0986, 0.0498, 0.0254, 0.0107]),
        ]),
        Preset::Synthetic => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("mnist".parse::<Preset>().is_err());
    }

    #[test]
    fn constants() {
        let pc = Preset::Mnist38.constants(100.0).unwrap();
        assert!((pc.smoothness - 0.2619).abs() < 1e-15);
        let pc = Preset::Cifar10Multi.constants(100.0).unwrap();
        assert_eq!(
            (pc.smoothness, pc.strong_convexity, pc.lipschitz),
            (1.0499, 0.0499, 2.0)
        );
        let pc = Preset::Cifar10Binary.constants(100.0).unwrap();
        assert_eq!(pc.smoothness, 0.26);
    }
}
