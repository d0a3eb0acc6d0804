use rand::Rng;

use super::config::{ExperimentConfig, SyntheticSpec};
use super::presets::Preset;
use crate::error::{Error, Result};
use crate::models::Dataset;
use crate::rng::{fill_standard_normal, purpose, RngState};

/// Draw a synthetic dataset; see [`SyntheticSpec`] for the layout.
pub fn generate_synthetic(spec: &SyntheticSpec, rng: &mut impl Rng) -> Result<Dataset> {
    let SyntheticSpec {
        n,
        dim,
        classes,
        separation,
        noise,
    } = *spec;
    if classes > 2 && classes as usize > dim {
        return Err(Error::invalid("need d ≥ c for synthetic clusters"));
    }
    let mut features = vec![0.0; n * dim];
    let mut labels = Vec::with_capacity(n);
    for row in features.chunks_mut(dim) {
        let label = rng.gen_range(0..classes);
        fill_standard_normal(rng, row);
        row.iter_mut().for_each(|x| *x *= noise);
        let shift = separation * noise;
        if classes == 2 {
            row[0] += if label == 1 { shift } else { -shift };
        } else {
            row[label as usize] += shift;
        }
        labels.push(label);
    }
    Ok(Dataset::new(features, labels, dim, classes, false)?.normalize())
}

/// Training and test sets for `cfg`: user CSV files when given, otherwise
/// synthetic draws from independent streams of the master seed.
pub fn load_dataset(cfg: &ExperimentConfig) -> Result<(Dataset, Dataset)> {
    match (&cfg.data, cfg.preset) {
        (Some(path), _) => {
            let train = Dataset::load(path)?;
            let test = match &cfg.test_data {
                Some(p) => Dataset::load(p)?,
                None => {
                    log::info!("no test set given; evaluating on the training set");
                    train.clone()
                }
            };
            if test.dim() != train.dim() || test.classes() != train.classes() {
                return Err(Error::invalid("test set shape differs from training set"));
            }
            Ok((train, test))
        }
        (None, Preset::Synthetic) => {
            let train = generate_synthetic(
                &cfg.synthetic,
                &mut RngState::for_trial(cfg.seed, 0, purpose::DATA).rng(),
            )?;
            let test_spec = SyntheticSpec {
                n: cfg.test_n,
                ..cfg.synthetic
            };
            let test = generate_synthetic(
                &test_spec,
                &mut RngState::for_trial(cfg.seed, 0, purpose::TEST_DATA).rng(),
            )?;
            Ok((train, test))
        }
        (None, preset) => Err(Error::invalid(format!(
            "preset {preset} needs feature data: pass data=<csv> (and optionally test-data=<csv>)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_is_normalized_and_separable() {
        let spec = SyntheticSpec::default();
        let data = generate_synthetic(&spec, &mut RngState::new(1).rng()).unwrap();
        assert_eq!((data.len(), data.dim()), (2000, 20));
        assert!(data.is_normalized());
        // the generating direction classifies almost everything
        let right = (0..data.len())
            .filter(|&i| (data.row(i)[0] >= 0.0) == (data.label(i) == 1))
            .count();
        assert!(right as f64 / 2000.0 > 0.99, "{right}");
    }

    #[test]
    fn multiclass_clusters() {
        let spec = SyntheticSpec {
            classes: 4,
            dim: 6,
            n: 400,
            ..Default::default()
        };
        let data = generate_synthetic(&spec, &mut RngState::new(2).rng()).unwrap();
        let right = (0..data.len())
            .filter(|&i| {
                let r = data.row(i);
                let best = (0..4).max_by(|&a, &b| r[a].total_cmp(&r[b])).unwrap();
                best as u32 == data.label(i)
            })
            .count();
        assert!(right > 360);
    }

    #[test]
    fn paper_presets_need_data() {
        let cfg = ExperimentConfig {
            preset: Preset::Mnist38,
            ..Default::default()
        };
        assert!(load_dataset(&cfg).is_err());
    }
}
