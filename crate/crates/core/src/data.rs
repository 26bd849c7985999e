//! Dataset loading (IDX, CSV), normalization and seeded subsetting.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::{Path, PathBuf};

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Rng};

pub const IDX_IMAGES_MAGIC: u32 = 0x0000_0803;
pub const IDX_LABELS_MAGIC: u32 = 0x0000_0801;

/// How features were mapped onto `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub enum Normalization {
    /// `(x − min) / (max − min)` with one pair for the whole matrix.
    Global { min: f64, max: f64 },
    /// Per-column min-max; constant columns map to 0.
    PerColumn { min: Vec<f64>, max: Vec<f64> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalizeMode {
    /// Divide by a fixed global range, e.g. `[0, 255]` for 8-bit pixels.
    Global,
    PerColumn,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub features: Matrix,
    pub labels: Option<Vec<i64>>,
    pub name: String,
    pub normalization: Option<Normalization>,
}

impl Dataset {
    pub fn new(features: Matrix, labels: Option<Vec<i64>>, name: impl Into<String>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != features.rows() {
                return Err(Error::InvalidArgument(format!(
                    "{} labels for {} samples",
                    l.len(),
                    features.rows()
                )));
            }
        }
        Ok(Dataset {
            features,
            labels,
            name: name.into(),
            normalization: None,
        })
    }

    pub fn len(&self) -> usize {
        self.features.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.features.rows() == 0
    }

    pub fn dim(&self) -> usize {
        self.features.cols()
    }

    /// Rows at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Dataset {
        Dataset {
            features: self.features.select_rows(indices),
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect()),
            name: self.name.clone(),
            normalization: self.normalization.clone(),
        }
    }

    /// `n_keep` distinct rows chosen uniformly at random.
    pub fn subsample(&self, n_keep: usize, seed: u64) -> Result<Dataset> {
        if n_keep > self.len() {
            return Err(Error::InvalidArgument(format!(
                "cannot keep {n_keep} of {} samples",
                self.len()
            )));
        }
        let indices = Rng::new(seed).sample_indices(self.len(), n_keep);
        Ok(self.select(&indices))
    }

    /// Shuffles and splits into `(first, rest)` with `round(fraction·n)` rows
    /// in the first part.
    pub fn split(&self, fraction: f64, seed: u64) -> Result<(Dataset, Dataset)> {
        if !(0.0..=1.0).contains(&fraction) {
            return Err(Error::InvalidArgument(format!("split fraction must lie in [0, 1], got {fraction}")));
        }
        let mut order: Vec<usize> = (0..self.len()).collect();
        Rng::new(seed).shuffle(&mut order);
        let cut = (fraction * self.len() as f64).round() as usize;
        Ok((self.select(&order[..cut]), self.select(&order[cut..])))
    }

    /// Distinct labels in ascending order.
    pub fn classes(&self) -> Vec<i64> {
        let mut c = self.labels.clone().unwrap_or_default();
        c.sort_unstable();
        c.dedup();
        c
    }
}

/// Min-max normalization. `Global` uses `range` when given (e.g. `(0, 255)`)
/// and the observed extremes otherwise.
pub fn normalize(ds: &Dataset, mode: NormalizeMode, range: Option<(f64, f64)>) -> Result<Dataset> {
    if ds.is_empty() {
        return Err(Error::Empty(format!("cannot normalize empty dataset '{}'", ds.name)));
    }
    let mut out = ds.clone();
    match mode {
        NormalizeMode::Global => {
            let (min, max) = range.unwrap_or_else(|| {
                let s = ds.features.as_slice();
                (s.iter().copied().fold(f64::INFINITY, f64::min), s.iter().copied().fold(f64::NEG_INFINITY, f64::max))
            });
            if !(max > min) {
                return Err(Error::InvalidArgument(format!("degenerate range [{min}, {max}]")));
            }
            out.features.map_inplace(|x| (x - min) / (max - min));
            out.normalization = Some(Normalization::Global { min, max });
        }
        NormalizeMode::PerColumn => {
            let d = ds.dim();
            let mut min = vec![f64::INFINITY; d];
            let mut max = vec![f64::NEG_INFINITY; d];
            for row in ds.features.row_iter() {
                for j in 0..d {
                    min[j] = min[j].min(row[j]);
                    max[j] = max[j].max(row[j]);
                }
            }
            for j in 0..d {
                if max[j] <= min[j] {
                    log::warn!("column {j} of '{}' is constant; it is set to 0", ds.name);
                }
            }
            for i in 0..out.len() {
                for (j, x) in out.features.row_mut(i).iter_mut().enumerate() {
                    let span = max[j] - min[j];
                    *x = if span > 0.0 { (*x - min[j]) / span } else { 0.0 };
                }
            }
            out.normalization = Some(Normalization::PerColumn { min, max });
        }
    }
    Ok(out)
}

/// Maps normalized values back to the original scale.
pub fn denormalize(x: &Matrix, norm: &Normalization) -> Result<Matrix> {
    match norm {
        Normalization::Global { min, max } => Ok(x.map(|v| v * (max - min) + min)),
        Normalization::PerColumn { min, max } => {
            if x.cols() != min.len() {
                return Err(Error::shape("denormalize", x.shape(), (x.rows(), min.len())));
            }
            let mut out = x.clone();
            for i in 0..out.rows() {
                for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                    *v = *v * (max[j] - min[j]) + min[j];
                }
            }
            Ok(out)
        }
    }
}

fn is_gz(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("gz"))
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut bytes = Vec::new();
    let mut reader: Box<dyn Read> = if is_gz(path) {
        Box::new(GzDecoder::new(BufReader::new(file)))
    } else {
        Box::new(BufReader::new(file))
    };
    reader.read_to_end(&mut bytes).map_err(|e| Error::io(path, e))?;
    Ok(bytes)
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    if is_gz(path) {
        let mut enc = GzEncoder::new(file, Compression::default());
        enc.write_all(bytes).map_err(|e| Error::io(path, e))?;
        enc.finish().map_err(|e| Error::io(path, e))?;
    } else {
        let mut f = file;
        f.write_all(bytes).map_err(|e| Error::io(path, e))?;
    }
    Ok(())
}

/// Header dims and raw payload of an IDX file of unsigned bytes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdxTensor {
    pub dims: Vec<u32>,
    pub data: Vec<u8>,
}

fn format_error(path: &Path, message: impl Into<String>) -> Error {
    Error::Format {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Parses an IDX byte stream with the expected magic number.
pub fn parse_idx(bytes: &[u8], magic: u32, path: &Path) -> Result<IdxTensor> {
    let word = |at: usize| -> Result<u32> {
        bytes
            .get(at..at + 4)
            .map(|b| u32::from_be_bytes([b[0], b[1], b[2], b[3]]))
            .ok_or_else(|| format_error(path, format!("truncated header ({} bytes)", bytes.len())))
    };
    let found = word(0)?;
    if found != magic {
        return Err(format_error(
            path,
            format!("bad magic number 0x{found:08x}, expected 0x{magic:08x}"),
        ));
    }
    let ndims = (magic & 0xff) as usize;
    let dims = (0..ndims).map(|i| word(4 + 4 * i)).collect::<Result<Vec<u32>>>()?;
    let start = 4 + 4 * ndims;
    let expected = dims.iter().map(|&d| d as usize).product::<usize>();
    let payload = &bytes[start..];
    if payload.len() < expected {
        return Err(format_error(
            path,
            format!("truncated payload: {} of {expected} bytes", payload.len()),
        ));
    }
    if payload.len() > expected {
        return Err(format_error(
            path,
            format!("{} trailing bytes after payload", payload.len() - expected),
        ));
    }
    Ok(IdxTensor {
        dims,
        data: payload.to_vec(),
    })
}

pub fn read_idx(path: impl AsRef<Path>, magic: u32) -> Result<IdxTensor> {
    let path = path.as_ref();
    parse_idx(&read_bytes(path)?, magic, path)
}

/// Encodes an unsigned-byte IDX tensor; the magic carries the rank.
pub fn encode_idx(dims: &[u32], data: &[u8]) -> Result<Vec<u8>> {
    if dims.is_empty() || dims.len() > 255 {
        return Err(Error::InvalidArgument(format!("IDX rank must lie in 1..=255, got {}", dims.len())));
    }
    if dims.iter().map(|&d| d as usize).product::<usize>() != data.len() {
        return Err(Error::InvalidArgument("IDX payload does not match dims".into()));
    }
    let mut out = Vec::with_capacity(4 + 4 * dims.len() + data.len());
    out.extend((0x0800u32 | dims.len() as u32).to_be_bytes());
    for d in dims {
        out.extend(d.to_be_bytes());
    }
    out.extend_from_slice(data);
    Ok(out)
}

pub fn write_idx(path: impl AsRef<Path>, dims: &[u32], data: &[u8]) -> Result<()> {
    let path = path.as_ref();
    write_bytes(path, &encode_idx(dims, data)?)
}

/// Loads an IDX image file, and optionally its labels, as raw pixel values
/// `0..=255`, one flattened image per row.
pub fn load_idx(images: impl AsRef<Path>, labels: Option<&Path>) -> Result<Dataset> {
    let images = images.as_ref();
    let t = read_idx(images, IDX_IMAGES_MAGIC)?;
    let n = t.dims[0] as usize;
    let d = (t.dims[1] * t.dims[2]) as usize;
    let features = Matrix::from_vec(n, d, t.data.into_iter().map(f64::from).collect())?;
    let labels = match labels {
        Some(path) => {
            let l = read_idx(path, IDX_LABELS_MAGIC)?;
            if l.dims[0] as usize != n {
                return Err(format_error(
                    path,
                    format!("{} labels for {n} images in {}", l.dims[0], images.display()),
                ));
            }
            Some(l.data.into_iter().map(i64::from).collect())
        }
        None => None,
    };
    let name = images
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "idx".into());
    Dataset::new(features, labels, name)
}

fn find_file(dir: &Path, stem: &str) -> Result<PathBuf> {
    for candidate in [stem.to_string(), format!("{stem}.gz")] {
        let p = dir.join(candidate);
        if p.exists() {
            return Ok(p);
        }
    }
    Err(Error::io(
        dir.join(stem),
        std::io::Error::new(std::io::ErrorKind::NotFound, "MNIST file not found (plain or .gz)"),
    ))
}

/// `$AEFUSE_DATA_DIR` when set, otherwise the `data/` directory of the
/// source checkout.
pub fn bundled_data_dir() -> PathBuf {
    match std::env::var_os("AEFUSE_DATA_DIR") {
        Some(dir) => PathBuf::from(dir),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MnistSplit {
    Train,
    Test,
}

/// Loads the canonical MNIST files from `dir` and scales pixels to `[0, 1]`.
pub fn load_mnist(dir: impl AsRef<Path>, split: MnistSplit) -> Result<Dataset> {
    let dir = dir.as_ref();
    let prefix = match split {
        MnistSplit::Train => "train",
        MnistSplit::Test => "t10k",
    };
    let images = find_file(dir, &format!("{prefix}-images-idx3-ubyte"))?;
    let labels = find_file(dir, &format!("{prefix}-labels-idx1-ubyte"))?;
    let mut ds = normalize(&load_idx(&images, Some(&labels))?, NormalizeMode::Global, Some((0.0, 255.0)))?;
    ds.name = format!("mnist-{prefix}");
    Ok(ds)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct CsvOptions {
    pub has_header: bool,
    /// Header name or zero-based index of the class column.
    pub label_column: Option<String>,
}

/// Loads a numeric CSV file.
pub fn load_csv(path: impl AsRef<Path>, opts: &CsvOptions) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .trim(csv::Trim::All)
        .from_reader(BufReader::new(file));
    let source = path.display().to_string();
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.clone(),
        line,
        message,
    };

    let header: Option<Vec<String>> = if opts.has_header {
        let h = reader.headers().map_err(|e| parse_err(1, e.to_string()))?;
        Some(h.iter().map(String::from).collect())
    } else {
        None
    };
    let label_index = match &opts.label_column {
        None => None,
        Some(column) => {
            let by_name = header.as_ref().and_then(|h| h.iter().position(|c| c == column));
            match by_name.or_else(|| column.parse().ok()) {
                Some(i) => Some(i),
                None => {
                    return Err(Error::InvalidArgument(format!(
                        "label column '{column}' not found in {source}"
                    )))
                }
            }
        }
    };

    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut width: Option<usize> = None;
    let mut rows = 0;
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(rows + 1, |p| p.line() as usize);
        if record.iter().all(str::is_empty) {
            continue;
        }
        match width {
            None => width = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(parse_err(line, format!("row has {} fields, expected {w}", record.len())));
            }
            _ => {}
        }
        if let Some(li) = label_index {
            if li >= record.len() {
                return Err(parse_err(line, format!("label column {li} out of range")));
            }
        }
        for (j, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| {
                parse_err(line, format!("column {}: '{cell}' is not a number", j + 1))
            })?;
            if !value.is_finite() {
                return Err(parse_err(line, format!("column {}: non-finite value", j + 1)));
            }
            if Some(j) == label_index {
                if value.fract() != 0.0 {
                    return Err(parse_err(line, format!("column {}: label '{cell}' is not an integer", j + 1)));
                }
                labels.push(value as i64);
            } else {
                data.push(value);
            }
        }
        rows += 1;
    }
    let width = width.unwrap_or(0);
    let d = width - usize::from(label_index.is_some() && width > 0);
    let features = Matrix::from_vec(rows, d, data)?;
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    Dataset::new(features, label_index.map(|_| labels), name)
}

/// Loads the breast-cancer CSV shipped under `data/` (30 features, header,
/// class column `malignant`) and normalizes every column to `[0, 1]`.
pub fn load_wdbc(path: impl AsRef<Path>) -> Result<Dataset> {
    let opts = CsvOptions {
        has_header: true,
        label_column: Some("malignant".into()),
    };
    let mut ds = normalize(&load_csv(path, &opts)?, NormalizeMode::PerColumn, None)?;
    ds.name = "wdbc".into();
    Ok(ds)
}

/// Fraction of samples whose nearest class centroid (Euclidean, centroids
/// computed on the same samples) is their own class.
pub fn nearest_centroid_accuracy(x: &Matrix, labels: &[i64]) -> Result<f64> {
    if x.rows() == 0 || labels.len() != x.rows() {
        return Err(Error::InvalidArgument(format!("{} labels for {} samples", labels.len(), x.rows())));
    }
    let mut classes: Vec<i64> = labels.to_vec();
    classes.sort_unstable();
    classes.dedup();
    let d = x.cols();
    let mut centroids = vec![vec![0.0; d]; classes.len()];
    let mut counts = vec![0usize; classes.len()];
    for (row, label) in x.row_iter().zip(labels) {
        let c = classes.binary_search(label).expect("label collected above");
        counts[c] += 1;
        for (m, v) in centroids[c].iter_mut().zip(row) {
            *m += v;
        }
    }
    for (m, n) in centroids.iter_mut().zip(&counts) {
        m.iter_mut().for_each(|v| *v /= *n as f64);
    }
    let correct = x
        .row_iter()
        .zip(labels)
        .filter(|(row, label)| {
            let dist = |m: &Vec<f64>| m.iter().zip(*row).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
            let best = (0..classes.len())
                .min_by(|&a, &b| dist(&centroids[a]).total_cmp(&dist(&centroids[b])))
                .expect("at least one class");
            classes[best] == **label
        })
        .count();
    Ok(correct as f64 / x.rows() as f64)
}

/// Share of the most frequent label.
pub fn majority_fraction(labels: &[i64]) -> f64 {
    let mut sorted = labels.to_vec();
    sorted.sort_unstable();
    let mut best = 0;
    let mut run = 0;
    for (i, l) in sorted.iter().enumerate() {
        run = if i > 0 && sorted[i - 1] == *l { run + 1 } else { 1 };
        best = best.max(run);
    }
    if labels.is_empty() {
        0.0
    } else {
        best as f64 / labels.len() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Rng;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest};

    #[test]
    fn tiny_idx_fixture() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.idx");
        let bytes = [
            0, 0, 8, 3, 0, 0, 0, 1, 0, 0, 0, 2, 0, 0, 0, 2, 0, 128, 255, 64,
        ];
        std::fs::write(&p, bytes).unwrap();
        let ds = load_idx(&p, None).unwrap();
        assert_eq!(ds.features.shape(), (1, 4));
        assert_eq!(ds.features.row(0), &[0.0, 128.0, 255.0, 64.0]);
        assert_eq!(encode_idx(&[1, 2, 2], &[0, 128, 255, 64]).unwrap(), bytes);
    }

    #[test]
    fn idx_errors() {
        let dir = tempfile::tempdir().unwrap();
        let images = dir.path().join("i.idx");
        let labels = dir.path().join("l.idx");
        write_idx(&images, &[2, 1, 2], &[1, 2, 3, 4]).unwrap();
        write_idx(&labels, &[3], &[0, 1, 2]).unwrap();
        assert!(matches!(load_idx(&images, Some(&labels)), Err(Error::Format { .. })));
        // images file passed as labels
        let err = read_idx(&images, IDX_LABELS_MAGIC).unwrap_err();
        assert!(err.to_string().contains("magic"));
        let full = encode_idx(&[2, 1, 2], &[1, 2, 3, 4]).unwrap();
        assert!(parse_idx(&full[..full.len() - 1], IDX_IMAGES_MAGIC, &images).unwrap_err().to_string().contains("truncated"));
        assert!(parse_idx(&full[..6], IDX_IMAGES_MAGIC, &images).is_err());
    }

    #[test]
    fn gz_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x-idx1-ubyte.gz");
        let data: Vec<u8> = (0..=255).collect();
        write_idx(&p, &[256], &data).unwrap();
        assert_eq!(read_idx(&p, IDX_LABELS_MAGIC).unwrap().data, data);
        // really compressed
        assert_eq!(&std::fs::read(&p).unwrap()[..2], &[0x1f, 0x8b]);
    }

    proptest! {
        #[test]
        fn idx_round_trip(n in 1u32..5, r in 1u32..6, c in 1u32..6, seed in any::<u64>()) {
            let mut rng = Rng::new(seed);
            let data: Vec<u8> = (0..n * r * c).map(|_| rng.below(256) as u8).collect();
            let bytes = encode_idx(&[n, r, c], &data).unwrap();
            let t = parse_idx(&bytes, IDX_IMAGES_MAGIC, Path::new("mem")).unwrap();
            prop_assert_eq!(t.dims, vec![n, r, c]);
            prop_assert_eq!(t.data, data);
        }

        #[test]
        fn normalization_inverts(seed in any::<u64>()) {
            let x = Rng::new(seed).normal(3.0, 5.0, 7, 4).unwrap();
            let ds = Dataset::new(x.clone(), None, "t").unwrap();
            for mode in [NormalizeMode::Global, NormalizeMode::PerColumn] {
                let n = normalize(&ds, mode, None).unwrap();
                prop_assert!(n.features.as_slice().iter().all(|v| (0.0..=1.0).contains(v)));
                let back = denormalize(&n.features, n.normalization.as_ref().unwrap()).unwrap();
                prop_assert!(back.max_abs_diff(&x).unwrap() <= 1e-12 * 30.0);
            }
        }
    }

    #[test]
    fn pixel_endpoints() {
        let ds = Dataset::new(Matrix::from_rows(&[[0.0, 255.0, 51.0]]).unwrap(), None, "p").unwrap();
        let n = normalize(&ds, NormalizeMode::Global, Some((0.0, 255.0))).unwrap();
        assert_eq!(n.features.row(0), &[0.0, 1.0, 0.2]);
    }

    #[test]
    fn per_column_idempotent_and_constant_column() {
        let x = Matrix::from_rows(&[[0.0, 0.5, 7.0], [1.0, 0.25, 7.0], [0.5, 1.0, 7.0], [0.2, 0.0, 7.0]]).unwrap();
        let ds = Dataset::new(x.clone(), None, "c").unwrap();
        let n = normalize(&ds, NormalizeMode::PerColumn, None).unwrap();
        for i in 0..4 {
            assert_eq!(&n.features.row(i)[..2], &x.row(i)[..2]);
            assert_eq!(n.features.get(i, 2), 0.0);
        }
    }

    #[test]
    fn csv_loading() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("a.csv");
        std::fs::write(&p, "1,2\n3.5,-4\n").unwrap();
        let ds = load_csv(&p, &CsvOptions::default()).unwrap();
        assert_eq!(ds.features, Matrix::from_rows(&[[1.0, 2.0], [3.5, -4.0]]).unwrap());
        assert!(ds.labels.is_none());

        std::fs::write(&p, "x,y,class\n1,2,0\n3,4,1\n").unwrap();
        let opts = CsvOptions {
            has_header: true,
            label_column: Some("class".into()),
        };
        let ds = load_csv(&p, &opts).unwrap();
        assert_eq!(ds.labels, Some(vec![0, 1]));
        assert_eq!(ds.dim(), 2);

        std::fs::write(&p, "x,y,class\n1,2,0\n3,abc,1\n").unwrap();
        match load_csv(&p, &opts) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 3);
                assert!(message.contains("column 2"), "{message}");
            }
            other => panic!("{other:?}"),
        }
        std::fs::write(&p, "1,2\n3\n").unwrap();
        assert!(load_csv(&p, &CsvOptions::default()).is_err());
    }

    #[test]
    fn centroid_classifier() {
        let x = Matrix::from_rows(&[[0.0, 0.0], [0.1, 0.0], [1.0, 1.0], [0.9, 1.0], [0.2, 0.1]]).unwrap();
        assert_eq!(nearest_centroid_accuracy(&x, &[0, 0, 1, 1, 0]).unwrap(), 1.0);
        assert_eq!(nearest_centroid_accuracy(&x, &[0, 0, 1, 1, 1]).unwrap(), 0.8);
        assert_eq!(majority_fraction(&[1, 0, 1, 1]), 0.75);
    }

    #[test]
    fn subsample_and_split() {
        let x = Matrix::from_vec(10, 1, (0..10).map(f64::from).collect()).unwrap();
        let ds = Dataset::new(x, Some((0..10).collect()), "s").unwrap();
        let all = ds.subsample(10, 3).unwrap();
        let mut seen: Vec<i64> = all.labels.clone().unwrap();
        seen.sort_unstable();
        assert_eq!(seen, (0..10).collect::<Vec<_>>());
        assert_eq!(ds.subsample(4, 9).unwrap(), ds.subsample(4, 9).unwrap());
        assert!(ds.subsample(11, 0).is_err());
        let (a, b) = ds.split(0.3, 1).unwrap();
        assert_eq!((a.len(), b.len()), (3, 7));
        for (row, label) in a.features.row_iter().zip(a.labels.unwrap()) {
            assert_eq!(row[0], label as f64);
        }
    }
}
