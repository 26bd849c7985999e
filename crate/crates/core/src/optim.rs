//! First-order update rules: plain SGD and the adaptive AdaGrad, RMSProp and
//! Adam variants.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OptimizerKind {
    Sgd { lr: f64 },
    AdaGrad { lr: f64, eps: f64 },
    RmsProp { lr: f64, decay: f64, eps: f64 },
    Adam { lr: f64, beta1: f64, beta2: f64, eps: f64 },
}

impl OptimizerKind {
    pub fn sgd() -> Self {
        OptimizerKind::Sgd { lr: 0.01 }
    }

    pub fn adagrad() -> Self {
        OptimizerKind::AdaGrad { lr: 0.01, eps: 1e-8 }
    }

    pub fn rmsprop() -> Self {
        OptimizerKind::RmsProp {
            lr: 0.001,
            decay: 0.9,
            eps: 1e-8,
        }
    }

    pub fn adam() -> Self {
        OptimizerKind::Adam {
            lr: 0.001,
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
        }
    }

    pub fn learning_rate(&self) -> f64 {
        match *self {
            OptimizerKind::Sgd { lr }
            | OptimizerKind::AdaGrad { lr, .. }
            | OptimizerKind::RmsProp { lr, .. }
            | OptimizerKind::Adam { lr, .. } => lr,
        }
    }

    pub fn with_learning_rate(mut self, new_lr: f64) -> Self {
        match &mut self {
            OptimizerKind::Sgd { lr }
            | OptimizerKind::AdaGrad { lr, .. }
            | OptimizerKind::RmsProp { lr, .. }
            | OptimizerKind::Adam { lr, .. } => *lr = new_lr,
        }
        self
    }

    pub fn name(&self) -> &'static str {
        match self {
            OptimizerKind::Sgd { .. } => "sgd",
            OptimizerKind::AdaGrad { .. } => "adagrad",
            OptimizerKind::RmsProp { .. } => "rmsprop",
            OptimizerKind::Adam { .. } => "adam",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |v: f64| v > 0.0 && v < 1.0;
        let ok = match *self {
            OptimizerKind::Sgd { lr } => lr > 0.0,
            OptimizerKind::AdaGrad { lr, eps } => lr > 0.0 && eps > 0.0,
            OptimizerKind::RmsProp { lr, decay, eps } => lr > 0.0 && open_unit(decay) && eps > 0.0,
            OptimizerKind::Adam {
                lr,
                beta1,
                beta2,
                eps,
            } => lr > 0.0 && open_unit(beta1) && open_unit(beta2) && eps > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("invalid optimizer hyperparameters: {self:?}")))
        }
    }
}

impl fmt::Display for OptimizerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OptimizerKind {
    type Err = Error;

    /// Parses a name into the optimizer with its default hyperparameters.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sgd" => Ok(Self::sgd()),
            "adagrad" => Ok(Self::adagrad()),
            "rmsprop" => Ok(Self::rmsprop()),
            "adam" => Ok(Self::adam()),
            _ => Err(Error::InvalidArgument(format!(
                "unknown optimizer '{s}' (expected sgd, adagrad, rmsprop or adam)"
            ))),
        }
    }
}

/// Per-parameter accumulators. `first` holds Adam's first moment; `second`
/// holds the squared-gradient sum (AdaGrad), its running average (RMSProp)
/// or Adam's second moment.
#[derive(Clone, Debug, Default)]
pub struct OptimizerState {
    pub step: u64,
    pub first: Vec<Vec<f64>>,
    pub second: Vec<Vec<f64>>,
}

#[derive(Clone, Debug)]
pub struct Optimizer {
    kind: OptimizerKind,
    state: OptimizerState,
}

impl Optimizer {
    pub fn new(kind: OptimizerKind) -> Self {
        Optimizer {
            kind,
            state: OptimizerState::default(),
        }
    }

    pub fn kind(&self) -> OptimizerKind {
        self.kind
    }

    pub fn state(&self) -> &OptimizerState {
        &self.state
    }

    /// Applies one update to every parameter group. The group layout is
    /// fixed by the first call.
    pub fn step(&mut self, params: &mut [&mut [f64]], grads: &[&[f64]]) -> Result<()> {
        if params.len() != grads.len() {
            return Err(Error::shape("optimizer step", (params.len(), 0), (grads.len(), 0)));
        }
        for (p, g) in params.iter().zip(grads) {
            if p.len() != g.len() {
                return Err(Error::shape("optimizer step", (1, p.len()), (1, g.len())));
            }
        }
        if self.state.step == 0 && self.state.second.is_empty() {
            self.state.second = params.iter().map(|p| vec![0.0; p.len()]).collect();
            if matches!(self.kind, OptimizerKind::Adam { .. }) {
                self.state.first = self.state.second.clone();
            }
        } else if self.state.second.len() != params.len()
            || self.state.second.iter().zip(params.iter()).any(|(s, p)| s.len() != p.len())
        {
            return Err(Error::InvalidArgument(
                "parameter layout changed between optimizer steps".into(),
            ));
        }
        self.state.step += 1;
        let t = self.state.step as f64;

        match self.kind {
            OptimizerKind::Sgd { lr } => {
                for (p, g) in params.iter_mut().zip(grads) {
                    for (w, gi) in p.iter_mut().zip(g.iter()) {
                        *w -= lr * gi;
                    }
                }
            }
            OptimizerKind::AdaGrad { lr, eps } => {
                for ((p, g), acc) in params.iter_mut().zip(grads).zip(&mut self.state.second) {
                    for ((w, gi), a) in p.iter_mut().zip(g.iter()).zip(acc.iter_mut()) {
                        *a += gi * gi;
                        *w -= lr * gi / (a.sqrt() + eps);
                    }
                }
            }
            OptimizerKind::RmsProp { lr, decay, eps } => {
                for ((p, g), acc) in params.iter_mut().zip(grads).zip(&mut self.state.second) {
                    for ((w, gi), a) in p.iter_mut().zip(g.iter()).zip(acc.iter_mut()) {
                        *a = decay * *a + (1.0 - decay) * gi * gi;
                        *w -= lr * gi / (a.sqrt() + eps);
                    }
                }
            }
            OptimizerKind::Adam {
                lr,
                beta1,
                beta2,
                eps,
            } => {
                let c1 = 1.0 - beta1.powf(t);
                let c2 = 1.0 - beta2.powf(t);
                for (((p, g), m), v) in params
                    .iter_mut()
                    .zip(grads)
                    .zip(&mut self.state.first)
                    .zip(&mut self.state.second)
                {
                    for (((w, gi), mi), vi) in p.iter_mut().zip(g.iter()).zip(m.iter_mut()).zip(v.iter_mut()) {
                        *mi = beta1 * *mi + (1.0 - beta1) * gi;
                        *vi = beta2 * *vi + (1.0 - beta2) * gi * gi;
                        let m_hat = *mi / c1;
                        let v_hat = *vi / c2;
                        *w -= lr * m_hat / (v_hat.sqrt() + eps);
                    }
                }
            }
        }
        Ok(())
    }
}
