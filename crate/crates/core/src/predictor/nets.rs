use super::ModelError;

/// Dense layer `y = W x + b` with a row-major `out × in` weight matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Linear {
    pub inputs: usize,
    pub outputs: usize,
    pub weight: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Linear {
    pub fn new(inputs: usize, outputs: usize, weight: Vec<f64>, bias: Vec<f64>) -> Result<Self, ModelError> {
        if weight.len() != inputs * outputs || bias.len() != outputs {
            return Err(ModelError::Invalid(format!(
                "layer {outputs}x{inputs} given {} weights and {} biases",
                weight.len(),
                bias.len()
            )));
        }
        Ok(Linear {
            inputs,
            outputs,
            weight,
            bias,
        })
    }

    pub fn zeros(inputs: usize, outputs: usize) -> Self {
        Linear {
            inputs,
            outputs,
            weight: vec![0.0; inputs * outputs],
            bias: vec![0.0; outputs],
        }
    }

    pub fn forward(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.inputs);
        self.weight
            .chunks_exact(self.inputs)
            .zip(&self.bias)
            .map(|(row, b)| row.iter().zip(x).fold(*b, |acc, (w, v)| acc + w * v))
            .collect()
    }

    fn is_finite(&self) -> bool {
        self.weight.iter().chain(&self.bias).all(|v| v.is_finite())
    }
}

fn relu(mut v: Vec<f64>) -> Vec<f64> {
    v.iter_mut().for_each(|x| *x = x.max(0.0));
    v
}

/// Two ReLU hidden layers and a scalar linear output. Dropout is a
/// training-time operation and does not appear at inference.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpHead {
    pub hidden1: Linear,
    pub hidden2: Linear,
    pub output: Linear,
}

impl MlpHead {
    pub fn new(hidden1: Linear, hidden2: Linear, output: Linear) -> Result<Self, ModelError> {
        if hidden2.inputs != hidden1.outputs || output.inputs != hidden2.outputs || output.outputs != 1 {
            return Err(ModelError::Invalid(format!(
                "head layers {}→{}, {}→{}, {}→{} do not chain to a scalar",
                hidden1.inputs, hidden1.outputs, hidden2.inputs, hidden2.outputs, output.inputs, output.outputs
            )));
        }
        let head = MlpHead {
            hidden1,
            hidden2,
            output,
        };
        if !head.layers().iter().all(|l| l.is_finite()) {
            return Err(ModelError::Invalid("head holds non-finite parameters".into()));
        }
        Ok(head)
    }

    pub fn input_dim(&self) -> usize {
        self.hidden1.inputs
    }

    fn layers(&self) -> [&Linear; 3] {
        [&self.hidden1, &self.hidden2, &self.output]
    }

    pub fn forward(&self, feature: &[f64]) -> Result<f64, ModelError> {
        if feature.len() != self.input_dim() {
            return Err(ModelError::InvalidInput(format!(
                "feature of length {} for a head expecting {}",
                feature.len(),
                self.input_dim()
            )));
        }
        let h1 = relu(self.hidden1.forward(feature));
        let h2 = relu(self.hidden2.forward(&h1));
        Ok(self.output.forward(&h2)[0])
    }
}

/// Gate mapping the three summary statistics to fusion logits.
#[derive(Debug, Clone, PartialEq)]
pub struct GateNet {
    pub hidden: Linear,
    pub output: Linear,
}

impl GateNet {
    pub fn new(hidden: Linear, output: Linear) -> Result<Self, ModelError> {
        if hidden.inputs != 3 || output.inputs != hidden.outputs || output.outputs != 3 {
            return Err(ModelError::Invalid(format!(
                "gate layers {}→{}, {}→{} must map 3 stats to 3 logits",
                hidden.inputs, hidden.outputs, output.inputs, output.outputs
            )));
        }
        if !(hidden.is_finite() && output.is_finite()) {
            return Err(ModelError::Invalid("gate holds non-finite parameters".into()));
        }
        Ok(GateNet { hidden, output })
    }

    pub fn zeros(hidden: usize) -> Self {
        GateNet {
            hidden: Linear::zeros(3, hidden),
            output: Linear::zeros(hidden, 3),
        }
    }

    pub fn logits(&self, stats: [f64; 3]) -> [f64; 3] {
        let h = relu(self.hidden.forward(&stats));
        let l = self.output.forward(&h);
        [l[0], l[1], l[2]]
    }

    /// Softmax fusion weights `(α, β, γ)` for the art/str/raw branches.
    pub fn forward(&self, stats: [f64; 3]) -> [f64; 3] {
        softmax3(self.logits(stats))
    }
}

/// Softmax with max subtraction.
pub fn softmax3(logits: [f64; 3]) -> [f64; 3] {
    let max = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e = logits.map(|l| (l - max).exp());
    let sum: f64 = e.iter().sum();
    e.map(|v| v / sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(inputs: usize, outputs: usize, w: &[f64], b: &[f64]) -> Linear {
        Linear::new(inputs, outputs, w.to_vec(), b.to_vec()).unwrap()
    }

    #[test]
    fn bias_passthrough() {
        let mut out = Linear::zeros(64, 1);
        out.bias[0] = 2.5;
        let head = MlpHead::new(Linear::zeros(8, 256), Linear::zeros(256, 64), out).unwrap();
        assert_eq!(head.forward(&[1.0; 8]).unwrap(), 2.5);
    }

    #[test]
    fn relu_kills_negative_preactivation() {
        let head = MlpHead::new(
            lin(2, 1, &[1.0, 1.0], &[-10.0]),
            lin(1, 1, &[1.0], &[0.0]),
            lin(1, 1, &[1.0], &[0.0]),
        )
        .unwrap();
        assert_eq!(head.forward(&[1.0, 2.0]).unwrap(), 0.0);
    }

    #[test]
    fn wrong_feature_length_is_rejected() {
        let head = MlpHead::new(Linear::zeros(4, 3), Linear::zeros(3, 2), Linear::zeros(2, 1)).unwrap();
        assert!(matches!(head.forward(&[0.0; 5]), Err(ModelError::InvalidInput(_))));
    }

    #[test]
    fn broken_chains_rejected() {
        assert!(MlpHead::new(Linear::zeros(4, 3), Linear::zeros(2, 2), Linear::zeros(2, 1)).is_err());
        assert!(GateNet::new(Linear::zeros(4, 16), Linear::zeros(16, 3)).is_err());
        let mut nan = Linear::zeros(3, 16);
        nan.weight[5] = f64::NAN;
        assert!(GateNet::new(nan, Linear::zeros(16, 3)).is_err());
    }

    #[test]
    fn zero_gate_is_uniform() {
        let w = GateNet::zeros(16).forward([0.3, 0.7, 2.0]);
        assert_eq!(w, [1.0 / 3.0; 3]);
    }

    #[test]
    fn softmax_is_stable() {
        let w = softmax3([1000.0, 0.0, 0.0]);
        assert!(w.iter().all(|v| v.is_finite()));
        assert!(w[0] > 0.999);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let w = softmax3([-1000.0, -1000.0, -1000.0]);
        assert_eq!(w, [1.0 / 3.0; 3]);
    }
}
