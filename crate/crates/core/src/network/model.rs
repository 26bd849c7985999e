use crate::activations::Activation;
use crate::corruption::Corruption;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};
use crate::losses::Loss;
use crate::regularizers::RegularizerConfig;

/// Dense layer computing `s(x Wᵀ + b)` row by row.
#[derive(Clone, Debug, PartialEq)]
pub struct Layer {
    /// `out × in`.
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

impl Layer {
    pub fn new(weights: Matrix, bias: Vec<f64>, activation: Activation) -> Result<Self> {
        if bias.len() != weights.rows() {
            return Err(Error::shape("layer bias", weights.shape(), (1, bias.len())));
        }
        Ok(Layer {
            weights,
            bias,
            activation,
        })
    }

    /// Glorot-uniform weights `U(−r, r)`, `r = √(6 / (fan_in + fan_out))`, zero bias.
    pub fn glorot(inputs: usize, outputs: usize, activation: Activation, rng: &mut Rng) -> Self {
        let r = (6.0 / (inputs + outputs) as f64).sqrt();
        Layer {
            weights: rng.uniform(-r, r, outputs, inputs).expect("r >= 0"),
            bias: vec![0.0; outputs],
            activation,
        }
    }

    pub fn inputs(&self) -> usize {
        self.weights.cols()
    }

    pub fn outputs(&self) -> usize {
        self.weights.rows()
    }

    pub fn pre_activation(&self, x: &Matrix) -> Result<Matrix> {
        let mut z = x.matmul_t(&self.weights)?;
        z.add_row_broadcast(&self.bias)?;
        Ok(z)
    }

    pub fn forward(&self, x: &Matrix) -> Result<Matrix> {
        let mut z = self.pre_activation(x)?;
        z.map_inplace(|v| self.activation.apply(v));
        Ok(z)
    }
}

/// Architecture and objective of an autoencoder.
///
/// The encoder runs `input_dim → hidden_dims… → encoding_dim`; the decoder
/// mirrors it back to `input_dim`. Hidden layers and the encoding layer use
/// `encoder_activation`, the reconstruction layer `output_activation`.
#[derive(Clone, Debug, PartialEq)]
pub struct AeConfig {
    pub input_dim: usize,
    pub encoding_dim: usize,
    pub hidden_dims: Vec<usize>,
    pub encoder_activation: Activation,
    pub output_activation: Activation,
    pub tied: bool,
    pub regularizers: RegularizerConfig,
    pub corruption: Corruption,
    pub loss: Loss,
}

impl AeConfig {
    /// A basic shallow autoencoder: `tanh` encoding, sigmoid reconstruction,
    /// cross-entropy loss, no penalties.
    pub fn new(input_dim: usize, encoding_dim: usize) -> Self {
        AeConfig {
            input_dim,
            encoding_dim,
            hidden_dims: Vec::new(),
            encoder_activation: Activation::Tanh,
            output_activation: Activation::Sigmoid,
            tied: false,
            regularizers: RegularizerConfig::none(),
            corruption: Corruption::None,
            loss: Loss::CrossEntropy,
        }
    }

    pub fn with_hidden(mut self, hidden: &[usize]) -> Self {
        self.hidden_dims = hidden.to_vec();
        self
    }

    pub fn with_activations(mut self, encoder: Activation, output: Activation) -> Self {
        self.encoder_activation = encoder;
        self.output_activation = output;
        self
    }

    pub fn with_loss(mut self, loss: Loss) -> Self {
        self.loss = loss;
        self
    }

    pub fn with_regularizers(mut self, regularizers: RegularizerConfig) -> Self {
        self.regularizers = regularizers;
        self
    }

    pub fn with_corruption(mut self, corruption: Corruption) -> Self {
        self.corruption = corruption;
        self
    }

    pub fn tied(mut self, tied: bool) -> Self {
        self.tied = tied;
        self
    }

    /// Unit counts of every layer boundary, input to reconstruction.
    pub fn layer_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.input_dim];
        dims.extend(&self.hidden_dims);
        dims.push(self.encoding_dim);
        dims.extend(self.hidden_dims.iter().rev());
        dims.push(self.input_dim);
        dims
    }

    pub fn validate(&self) -> Result<()> {
        if self.input_dim == 0 || self.encoding_dim == 0 || self.hidden_dims.contains(&0) {
            return Err(Error::Config("layer sizes must be at least 1".into()));
        }
        self.loss.validate()?;
        self.regularizers.validate()?;
        self.corruption.validate()?;
        if self.regularizers.sparsity.is_some() && !self.encoder_activation.is_sigmoidal() {
            return Err(Error::Config(format!(
                "sparsity requires a sigmoid or tanh encoding activation, got {}",
                self.encoder_activation
            )));
        }
        if self.regularizers.contraction.is_some()
            && (!self.hidden_dims.is_empty() || !self.encoder_activation.is_sigmoidal())
        {
            return Err(Error::Config(
                "contractive requires shallow sigmoid/tanh encoder".into(),
            ));
        }
        Ok(())
    }
}

/// Feed-forward autoencoder: layers `[0, split)` form the encoder, the rest
/// the decoder.
///
/// When `tied`, decoder layer `k` holds the transpose of encoder layer
/// `L − 1 − k`; only the encoder copy is a trainable parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    layers: Vec<Layer>,
    split: usize,
    tied: bool,
}

/// Pre- and post-activation values of every layer for one batch.
#[derive(Clone, Debug)]
pub struct ForwardCache {
    pub input: Matrix,
    pub pre: Vec<Matrix>,
    pub post: Vec<Matrix>,
}

impl ForwardCache {
    pub fn output(&self) -> &Matrix {
        self.post.last().unwrap_or(&self.input)
    }

    /// Input seen by layer `k`.
    pub fn layer_input(&self, k: usize) -> &Matrix {
        if k == 0 {
            &self.input
        } else {
            &self.post[k - 1]
        }
    }
}

impl Network {
    pub fn new(layers: Vec<Layer>, split: usize, tied: bool) -> Result<Self> {
        if layers.is_empty() || split == 0 || split >= layers.len() {
            return Err(Error::Config(format!(
                "encoder split {split} must fall strictly inside {} layers",
                layers.len()
            )));
        }
        for (k, pair) in layers.windows(2).enumerate() {
            if pair[0].outputs() != pair[1].inputs() {
                return Err(Error::Config(format!(
                    "layer {} outputs {} units but layer {} expects {}",
                    k,
                    pair[0].outputs(),
                    k + 1,
                    pair[1].inputs()
                )));
            }
        }
        for layer in &layers {
            if layer.bias.len() != layer.outputs() {
                return Err(Error::shape("layer bias", layer.weights.shape(), (1, layer.bias.len())));
            }
        }
        let first = layers[0].inputs();
        let last = layers[layers.len() - 1].outputs();
        if first != last {
            return Err(Error::Config(format!(
                "reconstruction width {last} differs from input width {first}"
            )));
        }
        let net = Network { layers, split, tied };
        if tied {
            if net.layers.len() != 2 * split {
                return Err(Error::Config("tied weights need a symmetric network".into()));
            }
            for k in split..net.layers.len() {
                let mirror = net.mirror_of(k);
                if net.layers[k].weights != net.layers[mirror].weights.transpose() {
                    return Err(Error::Config(format!(
                        "tied layer {k} is not the transpose of layer {mirror}"
                    )));
                }
            }
        }
        Ok(net)
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layer(&self, k: usize) -> &Layer {
        &self.layers[k]
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn is_tied(&self) -> bool {
        self.tied
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].inputs()
    }

    pub fn encoding_dim(&self) -> usize {
        self.layers[self.split - 1].outputs()
    }

    pub fn encoding_activation(&self) -> Activation {
        self.layers[self.split - 1].activation
    }

    pub(crate) fn mirror_of(&self, k: usize) -> usize {
        self.layers.len() - 1 - k
    }

    /// True when layer `k`'s weight matrix is a copy of an encoder matrix.
    pub fn is_tied_copy(&self, k: usize) -> bool {
        self.tied && k >= self.split
    }

    /// Number of free parameters.
    pub fn parameter_count(&self) -> usize {
        self.layers
            .iter()
            .enumerate()
            .map(|(k, l)| l.bias.len() + if self.is_tied_copy(k) { 0 } else { l.weights.len() })
            .sum()
    }

    /// Weight matrices that are free parameters.
    pub fn trainable_weights(&self) -> Vec<&Matrix> {
        self.layers
            .iter()
            .enumerate()
            .filter(|(k, _)| !self.is_tied_copy(*k))
            .map(|(_, l)| &l.weights)
            .collect()
    }

    /// Mutable views of every free parameter, in the order
    /// `W₀, b₀, W₁, b₁, …` with tied decoder weights skipped.
    pub fn parameters_mut(&mut self) -> Vec<&mut [f64]> {
        let split = self.split;
        let tied = self.tied;
        let mut out = Vec::with_capacity(2 * self.layers.len());
        for (k, layer) in self.layers.iter_mut().enumerate() {
            if !(tied && k >= split) {
                out.push(layer.weights.as_mut_slice());
            }
            out.push(layer.bias.as_mut_slice());
        }
        out
    }

    /// The same layers with every weight trainable on its own.
    pub fn untied(mut self) -> Network {
        self.tied = false;
        self
    }

    /// Re-derives tied decoder weights from their encoder mirrors.
    pub fn sync_tied(&mut self) {
        if !self.tied {
            return;
        }
        for k in self.split..self.layers.len() {
            let mirror = self.mirror_of(k);
            self.layers[k].weights = self.layers[mirror].weights.transpose();
        }
    }

    fn check_input(&self, x: &Matrix) -> Result<()> {
        if x.cols() != self.input_dim() {
            return Err(Error::shape("network input", x.shape(), (x.rows(), self.input_dim())));
        }
        Ok(())
    }

    pub fn forward(&self, x: &Matrix) -> Result<ForwardCache> {
        self.check_input(x)?;
        let mut pre = Vec::with_capacity(self.layers.len());
        let mut post: Vec<Matrix> = Vec::with_capacity(self.layers.len());
        for layer in &self.layers {
            let input = post.last().unwrap_or(x);
            let z = layer.pre_activation(input)?;
            let a = layer.activation.activate(&z);
            pre.push(z);
            post.push(a);
        }
        Ok(ForwardCache {
            input: x.clone(),
            pre,
            post,
        })
    }

    fn run(&self, layers: &[Layer], x: &Matrix) -> Result<Matrix> {
        let mut h = layers[0].forward(x)?;
        for layer in &layers[1..] {
            h = layer.forward(&h)?;
        }
        Ok(h)
    }

    /// Codes produced by the encoder. Inputs are never corrupted here.
    pub fn encode(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        self.run(&self.layers[..self.split], x)
    }

    pub fn decode(&self, codes: &Matrix) -> Result<Matrix> {
        if codes.cols() != self.encoding_dim() {
            return Err(Error::shape("decode", codes.shape(), (codes.rows(), self.encoding_dim())));
        }
        self.run(&self.layers[self.split..], codes)
    }

    pub fn reconstruct(&self, x: &Matrix) -> Result<Matrix> {
        self.check_input(x)?;
        self.run(&self.layers, x)
    }
}

/// Builds the symmetric autoencoder described by `cfg` with Glorot-uniform
/// weights and zero biases.
pub fn build_autoencoder(cfg: &AeConfig, rng: &mut Rng) -> Result<Network> {
    cfg.validate()?;
    let dims = cfg.layer_dims();
    let n_layers = dims.len() - 1;
    let split = n_layers / 2;
    let mut layers = Vec::with_capacity(n_layers);
    for k in 0..n_layers {
        let activation = if k + 1 == n_layers {
            cfg.output_activation
        } else {
            cfg.encoder_activation
        };
        if cfg.tied && k >= split {
            let mirror: &Layer = &layers[n_layers - 1 - k];
            layers.push(Layer {
                weights: mirror.weights.transpose(),
                bias: vec![0.0; dims[k + 1]],
                activation,
            });
        } else {
            layers.push(Layer::glorot(dims[k], dims[k + 1], activation, rng));
        }
    }
    Network::new(layers, split, cfg.tied)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_case_study_shape() {
        let net = build_autoencoder(&AeConfig::new(784, 36), &mut Rng::new(0)).unwrap();
        assert_eq!(net.depth(), 2);
        assert_eq!(net.split(), 1);
        assert_eq!(net.layer(0).weights.shape(), (36, 784));
        assert_eq!(net.layer(1).weights.shape(), (784, 36));
        assert_eq!(net.encoding_dim(), 36);
    }

    #[test]
    fn deep_shape_is_mirrored() {
        let cfg = AeConfig::new(20, 4).with_hidden(&[12, 8]);
        assert_eq!(cfg.layer_dims(), vec![20, 12, 8, 4, 8, 12, 20]);
        let net = build_autoencoder(&cfg, &mut Rng::new(0)).unwrap();
        assert_eq!(net.depth(), 6);
        assert_eq!(net.split(), 3);
        assert_eq!(net.layer(5).activation, Activation::Sigmoid);
        assert_eq!(net.layer(4).activation, Activation::Tanh);
    }

    #[test]
    fn glorot_bounds_and_determinism() {
        let cfg = AeConfig::new(30, 10);
        let a = build_autoencoder(&cfg, &mut Rng::new(5)).unwrap();
        let b = build_autoencoder(&cfg, &mut Rng::new(5)).unwrap();
        assert_eq!(a, b);
        let r = (6.0f64 / 40.0).sqrt();
        assert!(a.layer(0).weights.as_slice().iter().all(|w| w.abs() <= r));
        assert!(a.layer(0).bias.iter().all(|b| *b == 0.0));
    }

    #[test]
    fn tied_construction() {
        let net = build_autoencoder(&AeConfig::new(6, 3).with_hidden(&[4]).tied(true), &mut Rng::new(1)).unwrap();
        assert_eq!(net.layer(3).weights, net.layer(0).weights.transpose());
        assert_eq!(net.layer(2).weights, net.layer(1).weights.transpose());
        // 6*4 + 4*3 shared weights, biases 4 + 3 + 4 + 6
        assert_eq!(net.parameter_count(), 24 + 12 + 17);
    }

    #[test]
    fn zero_weight_linear_net_outputs_bias() {
        let layers = vec![
            Layer::new(Matrix::zeros(2, 3), vec![0.5, -1.0], Activation::Linear).unwrap(),
            Layer::new(Matrix::zeros(3, 2), vec![1.0, 2.0, 3.0], Activation::Linear).unwrap(),
        ];
        let net = Network::new(layers, 1, false).unwrap();
        let x = Matrix::filled(4, 3, 7.0);
        let out = net.reconstruct(&x).unwrap();
        for row in out.row_iter() {
            assert_eq!(row, &[1.0, 2.0, 3.0]);
        }
    }

    #[test]
    fn identity_net_reproduces_input() {
        let layers = vec![
            Layer::new(Matrix::identity(3), vec![0.0; 3], Activation::Linear).unwrap(),
            Layer::new(Matrix::identity(3), vec![0.0; 3], Activation::Linear).unwrap(),
        ];
        let net = Network::new(layers, 1, false).unwrap();
        let x = Matrix::from_rows(&[[0.1, 0.2, 0.3], [-1.0, 5.0, 2.0]]).unwrap();
        assert_eq!(net.reconstruct(&x).unwrap(), x);
    }

    #[test]
    fn activation_ranges_of_default_net() {
        let net = build_autoencoder(&AeConfig::new(784, 36), &mut Rng::new(2)).unwrap();
        let x = Rng::new(3).uniform(0.0, 1.0, 5, 784).unwrap();
        let codes = net.encode(&x).unwrap();
        assert!(codes.as_slice().iter().all(|v| *v > -1.0 && *v < 1.0));
        let out = net.reconstruct(&x).unwrap();
        assert!(out.as_slice().iter().all(|v| *v > 0.0 && *v < 1.0));
        assert_eq!(net.decode(&codes).unwrap(), out);
    }

    #[test]
    fn structural_errors() {
        let l1 = Layer::glorot(4, 2, Activation::Tanh, &mut Rng::new(0));
        let l2 = Layer::glorot(3, 4, Activation::Tanh, &mut Rng::new(0));
        assert!(Network::new(vec![l1.clone(), l2], 1, false).is_err());
        let l3 = Layer::glorot(2, 5, Activation::Tanh, &mut Rng::new(0));
        assert!(Network::new(vec![l1.clone(), l3], 1, false).is_err());
        let l4 = Layer::glorot(2, 4, Activation::Tanh, &mut Rng::new(9));
        assert!(Network::new(vec![l1, l4], 1, true).is_err());
        assert!(AeConfig::new(0, 3).validate().is_err());
        let bad = AeConfig::new(10, 3).with_hidden(&[5]).with_regularizers(RegularizerConfig {
            contraction: Some(0.1),
            ..RegularizerConfig::none()
        });
        assert!(bad.validate().is_err());
        let net = build_autoencoder(&AeConfig::new(5, 2), &mut Rng::new(0)).unwrap();
        assert!(net.encode(&Matrix::zeros(1, 4)).is_err());
    }
}
