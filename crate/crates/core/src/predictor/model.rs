use std::path::Path;

use rand::distr::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::nets::{GateNet, Linear, MlpHead};
use super::ModelError;
use crate::tensor::{read_bundle_file, write_bundle_file, Tensor, TensorBundle};

pub const GATE_INPUTS: usize = 3;
pub const GATE_HIDDEN: usize = 16;

const HEADS: [&str; 3] = ["head_art", "head_str", "head_raw"];

/// Three branch heads, the fusion gate and the layer widths.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelBundle {
    pub head_art: MlpHead,
    pub head_str: MlpHead,
    pub head_raw: MlpHead,
    pub gate: GateNet,
    pub channels: usize,
    pub hidden1: usize,
    pub hidden2: usize,
}

impl ModelBundle {
    /// Builds the model from canonically named bundle entries. The first
    /// missing entry is reported by name.
    pub fn from_bundle(bundle: &TensorBundle) -> Result<Self, ModelError> {
        let meta = entry(bundle, "meta", &[3])?;
        let dims: Vec<usize> = meta
            .iter()
            .map(|&v| {
                if v >= 1.0 && v.fract() == 0.0 && v <= (1u32 << 24) as f64 {
                    Ok(v as usize)
                } else {
                    Err(ModelError::Invalid(format!("meta holds {meta:?}, expected positive integers")))
                }
            })
            .collect::<Result<_, _>>()?;
        let (c, h1, h2) = (dims[0], dims[1], dims[2]);

        let head = |prefix: &str| -> Result<MlpHead, ModelError> {
            MlpHead::new(
                layer(bundle, prefix, "w1", "b1", c, h1)?,
                layer(bundle, prefix, "w2", "b2", h1, h2)?,
                layer(bundle, prefix, "w3", "b3", h2, 1)?,
            )
        };
        let head_art = head(HEADS[0])?;
        let head_str = head(HEADS[1])?;
        let head_raw = head(HEADS[2])?;
        let gate = GateNet::new(
            layer(bundle, "gate", "w1", "b1", GATE_INPUTS, GATE_HIDDEN)?,
            layer(bundle, "gate", "w2", "b2", GATE_HIDDEN, 3)?,
        )?;
        Ok(ModelBundle {
            head_art,
            head_str,
            head_raw,
            gate,
            channels: c,
            hidden1: h1,
            hidden2: h2,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, ModelError> {
        Self::from_bundle(&read_bundle_file(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<usize, ModelError> {
        Ok(write_bundle_file(&self.to_bundle()?, path)?)
    }

    /// Serializes to canonical entries; parameters are stored as `f32`.
    pub fn to_bundle(&self) -> Result<TensorBundle, ModelError> {
        let mut b = TensorBundle::new();
        let mut put_layer = |prefix: &str, w: &str, bias: &str, l: &Linear| -> Result<(), ModelError> {
            b.push(format!("{prefix}.{w}"), to_tensor(vec![l.outputs, l.inputs], &l.weight)?)?;
            b.push(format!("{prefix}.{bias}"), to_tensor(vec![l.outputs], &l.bias)?)?;
            Ok(())
        };
        for (prefix, head) in HEADS.iter().zip([&self.head_art, &self.head_str, &self.head_raw]) {
            put_layer(prefix, "w1", "b1", &head.hidden1)?;
            put_layer(prefix, "w2", "b2", &head.hidden2)?;
            put_layer(prefix, "w3", "b3", &head.output)?;
        }
        put_layer("gate", "w1", "b1", &self.gate.hidden)?;
        put_layer("gate", "w2", "b2", &self.gate.output)?;
        b.push(
            "meta",
            to_tensor(vec![3], &[self.channels as f64, self.hidden1 as f64, self.hidden2 as f64])?,
        )?;
        Ok(b)
    }

    /// Seeded random initialization, each layer uniform in
    /// `±1/sqrt(fan_in)`. Parameters are drawn as `f32` so the model
    /// survives a bundle round trip unchanged.
    pub fn random(seed: u64, channels: usize, hidden1: usize, hidden2: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut layer = |inputs: usize, outputs: usize| {
            let bound = 1.0 / (inputs as f32).sqrt();
            let dist = Uniform::new_inclusive(-bound, bound).expect("finite bound");
            let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| f64::from(dist.sample(&mut rng))).collect() };
            let weight = draw(inputs * outputs);
            let bias = draw(outputs);
            Linear {
                inputs,
                outputs,
                weight,
                bias,
            }
        };
        let mut head = || MlpHead {
            hidden1: layer(channels, hidden1),
            hidden2: layer(hidden1, hidden2),
            output: layer(hidden2, 1),
        };
        let head_art = head();
        let head_str = head();
        let head_raw = head();
        let gate = GateNet {
            hidden: layer(GATE_INPUTS, GATE_HIDDEN),
            output: layer(GATE_HIDDEN, 3),
        };
        ModelBundle {
            head_art,
            head_str,
            head_raw,
            gate,
            channels,
            hidden1,
            hidden2,
        }
    }
}

fn to_tensor(shape: Vec<usize>, values: &[f64]) -> Result<Tensor, ModelError> {
    Ok(Tensor::new(shape, values.iter().map(|&v| v as f32).collect())?)
}

fn entry(bundle: &TensorBundle, name: &str, shape: &[usize]) -> Result<Vec<f64>, ModelError> {
    let t = bundle
        .get(name)
        .ok_or_else(|| ModelError::MissingEntry(name.to_string()))?;
    if t.shape() != shape {
        return Err(ModelError::Shape {
            entry: name.to_string(),
            expected: shape.to_vec(),
            actual: t.shape().to_vec(),
        });
    }
    if !t.data().iter().all(|v| v.is_finite()) {
        return Err(ModelError::NonFinite(name.to_string()));
    }
    Ok(t.data().iter().map(|&v| f64::from(v)).collect())
}

fn layer(
    bundle: &TensorBundle,
    prefix: &str,
    w: &str,
    b: &str,
    inputs: usize,
    outputs: usize,
) -> Result<Linear, ModelError> {
    let weight = entry(bundle, &format!("{prefix}.{w}"), &[outputs, inputs])?;
    let bias = entry(bundle, &format!("{prefix}.{b}"), &[outputs])?;
    Linear::new(inputs, outputs, weight, bias)
}
