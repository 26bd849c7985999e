//! The `AEFv1` text model format.
//!
//! ```text
//! AEFv1
//! layers 2
//! split 1
//! tied 0
//! layer 0 784 36 tanh
//! <36 lines of 784 numbers: W row by row>
//! <1 line of 36 numbers: b>
//! layer 1 36 784 sigmoid
//! ...
//! ```
//!
//! Numbers are written with 17 significant digits so that loading restores
//! every weight bit for bit.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::activations::Activation;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::model::{Layer, Network};

pub const MAGIC: &str = "AEFv1";

fn push_numbers(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{v:.16e}").expect("writing to a String");
    }
    out.push('\n');
}

/// Serializes a network to `AEFv1` text.
pub fn model_to_string(net: &Network) -> String {
    let mut out = String::new();
    writeln!(out, "{MAGIC}").unwrap();
    writeln!(out, "layers {}", net.depth()).unwrap();
    writeln!(out, "split {}", net.split()).unwrap();
    writeln!(out, "tied {}", u8::from(net.is_tied())).unwrap();
    for (k, layer) in net.layers().iter().enumerate() {
        writeln!(out, "layer {k} {} {} {}", layer.inputs(), layer.outputs(), layer.activation).unwrap();
        for row in layer.weights.row_iter() {
            push_numbers(&mut out, row);
        }
        push_numbers(&mut out, &layer.bias);
    }
    out
}

pub fn save_model(net: &Network, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, model_to_string(net)).map_err(|e| Error::io(path, e))
}

pub fn load_model(path: impl AsRef<Path>) -> Result<Network> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_model(&text, &path.display().to_string())
}

struct Lines<'a> {
    inner: std::iter::Enumerate<std::str::Lines<'a>>,
    source: &'a str,
    line: usize,
}

impl<'a> Lines<'a> {
    fn error(&self, line: usize, message: impl Into<String>) -> Error {
        Error::Parse {
            path: self.source.to_string(),
            line,
            message: message.into(),
        }
    }

    fn next(&mut self, what: &str) -> Result<&'a str> {
        match self.inner.next() {
            Some((i, text)) => {
                self.line = i + 1;
                Ok(text.trim_end_matches('\r'))
            }
            None => Err(self.error(self.line + 1, format!("unexpected end of file, expected {what}"))),
        }
    }

    fn keyword(&mut self, key: &str) -> Result<usize> {
        let text = self.next(key)?;
        let mut parts = text.split_whitespace();
        match (parts.next(), parts.next(), parts.next()) {
            (Some(k), Some(v), None) if k == key => {
                v.parse().map_err(|_| self.error(self.line, format!("invalid {key} value '{v}'")))
            }
            _ => Err(self.error(self.line, format!("expected '{key} <n>', found '{text}'"))),
        }
    }

    fn numbers(&mut self, count: usize, what: &str) -> Result<Vec<f64>> {
        let text = self.next(what)?;
        let mut values = Vec::with_capacity(count);
        for token in text.split_whitespace() {
            let v: f64 = token
                .parse()
                .map_err(|_| self.error(self.line, format!("invalid number '{token}' in {what}")))?;
            if !v.is_finite() {
                return Err(self.error(self.line, format!("non-finite value in {what}")));
            }
            values.push(v);
        }
        if values.len() != count {
            return Err(self.error(
                self.line,
                format!("{what} has {} values, expected {count}", values.len()),
            ));
        }
        Ok(values)
    }
}

/// Parses `AEFv1` text; `source` names the input in error messages.
pub fn parse_model(text: &str, source: &str) -> Result<Network> {
    let mut lines = Lines {
        inner: text.lines().enumerate(),
        source,
        line: 0,
    };
    let header = lines.next("header")?;
    if header.trim() != MAGIC {
        return Err(lines.error(1, format!("expected header '{MAGIC}', found '{header}'")));
    }
    let depth = lines.keyword("layers")?;
    let split = lines.keyword("split")?;
    let tied = match lines.keyword("tied")? {
        0 => false,
        1 => true,
        _ => return Err(lines.error(lines.line, "tied must be 0 or 1")),
    };
    if depth == 0 {
        return Err(lines.error(2, "a model needs at least one layer"));
    }

    let mut layers = Vec::with_capacity(depth);
    for k in 0..depth {
        let head = lines.next("layer header")?;
        let parts: Vec<&str> = head.split_whitespace().collect();
        let at = lines.line;
        if parts.len() != 5 || parts[0] != "layer" {
            return Err(lines.error(at, format!("expected 'layer <i> <in> <out> <activation>', found '{head}'")));
        }
        let index: usize = parts[1].parse().map_err(|_| lines.error(at, "invalid layer index"))?;
        if index != k {
            return Err(lines.error(at, format!("expected layer {k}, found layer {index}")));
        }
        let inputs: usize = parts[2].parse().map_err(|_| lines.error(at, "invalid input width"))?;
        let outputs: usize = parts[3].parse().map_err(|_| lines.error(at, "invalid output width"))?;
        if inputs == 0 || outputs == 0 {
            return Err(lines.error(at, "layer widths must be at least 1"));
        }
        if let Some(prev) = layers.last().map(|l: &Layer| l.outputs()) {
            if prev != inputs {
                return Err(lines.error(at, format!("layer {k} expects {inputs} inputs but the previous layer has {prev} outputs")));
            }
        }
        let activation: Activation = parts[4]
            .parse()
            .map_err(|e: Error| lines.error(at, e.to_string()))?;
        let mut data = Vec::with_capacity(inputs * outputs);
        for r in 0..outputs {
            data.extend(lines.numbers(inputs, &format!("row {r} of layer {k} weights"))?);
        }
        let bias = lines.numbers(outputs, &format!("layer {k} bias"))?;
        let weights = Matrix::from_vec(outputs, inputs, data)?;
        layers.push(Layer::new(weights, bias, activation)?);
    }
    let end = lines.line;
    if let Some((i, extra)) = lines.inner.find(|(_, l)| !l.trim().is_empty()) {
        return Err(lines.error(i + 1, format!("unexpected content after layer {}: '{extra}'", depth - 1)));
    }
    Network::new(layers, split, tied).map_err(|e| lines.error(end, e.to_string()))
}
