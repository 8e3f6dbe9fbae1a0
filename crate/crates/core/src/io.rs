//! CSV and NPY loading for the command line.
//!
//! Every parse or filesystem problem is reported as `IoError`.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use ndarray::{Array2, ArrayD, IxDyn, ShapeBuilder};
use npyz::{NpyFile, Order, TypeChar, WriterBuilder};

use crate::error::{EvaluationError, Result};
use crate::types::{Image, Mask, PixelKind};

fn io_err(path: &Path, msg: impl std::fmt::Display) -> EvaluationError {
    EvaluationError::IoError(format!("{}: {msg}", path.display()))
}

fn is_npy(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("npy"))
}

/// Element storage of a loaded NPY array.
#[derive(Debug, Clone, PartialEq)]
pub enum NpyValues {
    Float(Vec<f64>),
    Int(Vec<i64>),
    UInt8(Vec<u8>),
    Bool(Vec<bool>),
}

/// A C-order array read from an NPY file.
#[derive(Debug, Clone, PartialEq)]
pub struct NpyArray {
    pub shape: Vec<usize>,
    pub values: NpyValues,
}

fn to_c_order<T: Clone>(shape: &[usize], data: Vec<T>, order: Order) -> Vec<T> {
    match order {
        Order::C => data,
        Order::Fortran => {
            let a = ArrayD::from_shape_vec(IxDyn(shape).f(), data).expect("element count matches shape");
            a.as_standard_layout().iter().cloned().collect()
        }
    }
}

impl NpyArray {
    pub fn read(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| io_err(path, e))?;
        let npy = NpyFile::new(BufReader::new(file)).map_err(|e| io_err(path, e))?;
        let shape: Vec<usize> = npy.shape().iter().map(|&d| d as usize).collect();
        let order = npy.order();
        let npyz::DType::Plain(ts) = npy.dtype() else {
            return Err(io_err(path, "structured dtypes are not supported"));
        };
        let unsupported = || io_err(path, format!("unsupported dtype {ts}; expected f8, f4, i8, i4, u1 or bool"));
        let read = |e: std::io::Error| io_err(path, e);
        let values = match (ts.type_char(), ts.size_field()) {
            (TypeChar::Float, 8) => NpyValues::Float(to_c_order(&shape, npy.into_vec::<f64>().map_err(read)?, order)),
            (TypeChar::Float, 4) => NpyValues::Float(to_c_order(
                &shape,
                npy.into_vec::<f32>().map_err(read)?.into_iter().map(f64::from).collect(),
                order,
            )),
            (TypeChar::Int, 8) => NpyValues::Int(to_c_order(&shape, npy.into_vec::<i64>().map_err(read)?, order)),
            (TypeChar::Int, 4) => NpyValues::Int(to_c_order(
                &shape,
                npy.into_vec::<i32>().map_err(read)?.into_iter().map(i64::from).collect(),
                order,
            )),
            (TypeChar::Uint, 1) => NpyValues::UInt8(to_c_order(&shape, npy.into_vec::<u8>().map_err(read)?, order)),
            (TypeChar::Bool, 1) => NpyValues::Bool(to_c_order(&shape, npy.into_vec::<bool>().map_err(read)?, order)),
            _ => return Err(unsupported()),
        };
        Ok(Self { shape, values })
    }

    pub fn len(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match &self.values {
            NpyValues::Float(v) => v.clone(),
            NpyValues::Int(v) => v.iter().map(|&x| x as f64).collect(),
            NpyValues::UInt8(v) => v.iter().map(|&x| f64::from(x)).collect(),
            NpyValues::Bool(v) => v.iter().map(|&x| f64::from(u8::from(x))).collect(),
        }
    }

    /// Integer view; floats must hold integral values.
    pub fn to_i64(&self, path: &Path) -> Result<Vec<i64>> {
        Ok(match &self.values {
            NpyValues::Float(v) => v
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    if x.fract() == 0.0 && x.abs() < 9.0e15 {
                        Ok(x as i64)
                    } else {
                        Err(io_err(path, format!("element {i} = {x} is not an integer")))
                    }
                })
                .collect::<Result<_>>()?,
            NpyValues::Int(v) => v.clone(),
            NpyValues::UInt8(v) => v.iter().map(|&x| i64::from(x)).collect(),
            NpyValues::Bool(v) => v.iter().map(|&x| i64::from(x)).collect(),
        })
    }

    pub fn pixel_kind(&self) -> PixelKind {
        match self.values {
            NpyValues::Float(_) => PixelKind::Float,
            NpyValues::UInt8(_) => PixelKind::UInt8,
            NpyValues::Int(_) | NpyValues::Bool(_) => PixelKind::Integer,
        }
    }
}

fn write_npy<T: npyz::Serialize + npyz::AutoSerialize + Copy>(path: &Path, shape: &[usize], data: &[T]) -> Result<()> {
    let expected: usize = shape.iter().product();
    if expected != data.len() {
        return Err(io_err(path, format!("{} elements do not fit shape {shape:?}", data.len())));
    }
    let file = File::create(path).map_err(|e| io_err(path, e))?;
    let shape: Vec<u64> = shape.iter().map(|&d| d as u64).collect();
    let mut writer = npyz::WriteOptions::new()
        .default_dtype()
        .shape(&shape)
        .writer(BufWriter::new(file))
        .begin_nd()
        .map_err(|e| io_err(path, e))?;
    writer.extend(data.iter().copied()).map_err(|e| io_err(path, e))?;
    writer.finish().map_err(|e| io_err(path, e))
}

pub fn write_npy_f64(path: &Path, shape: &[usize], data: &[f64]) -> Result<()> {
    write_npy(path, shape, data)
}

pub fn write_npy_i64(path: &Path, shape: &[usize], data: &[i64]) -> Result<()> {
    write_npy(path, shape, data)
}

pub fn write_npy_u8(path: &Path, shape: &[usize], data: &[u8]) -> Result<()> {
    write_npy(path, shape, data)
}

/// Raw CSV cells, rectangular. Empty files are an error.
fn read_csv_cells(path: &Path, header: bool) -> Result<Vec<Vec<String>>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| io_err(path, e))?;
    let mut rows = Vec::new();
    for (i, rec) in reader.records().enumerate() {
        let rec = rec.map_err(|e| io_err(path, e))?;
        let row: Vec<String> = rec.iter().map(str::to_string).collect();
        if let Some(first) = rows.first().map(Vec::len) {
            if row.len() != first {
                return Err(io_err(path, format!("row {} has {} fields, expected {first}", i + 1, row.len())));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(io_err(path, "no data rows"));
    }
    Ok(rows)
}

fn parse_real(path: &Path, cell: &str, row: usize, col: usize) -> Result<f64> {
    if cell.is_empty() {
        return Ok(f64::NAN);
    }
    cell.parse()
        .map_err(|_| io_err(path, format!("row {} column {}: `{cell}` is not a number", row + 1, col + 1)))
}

fn parse_label(path: &Path, cell: &str, row: usize, col: usize) -> Result<i64> {
    cell.parse().map_err(|_| {
        io_err(
            path,
            format!("row {} column {}: label `{cell}` is not an integer", row + 1, col + 1),
        )
    })
}

fn flatten_vector<T>(path: &Path, rows: Vec<Vec<T>>) -> Result<Vec<T>> {
    let cols = rows[0].len();
    if cols == 1 || rows.len() == 1 {
        Ok(rows.into_iter().flatten().collect())
    } else {
        Err(io_err(path, format!("expected a single column, found {cols} columns")))
    }
}

fn npy_vector(path: &Path) -> Result<NpyArray> {
    let a = NpyArray::read(path)?;
    match a.shape.as_slice() {
        [_] => Ok(a),
        [_, 1] | [1, _] => Ok(a),
        other => Err(io_err(path, format!("expected a 1-D array, got shape {other:?}"))),
    }
}

/// Real vector from a one-column CSV or a 1-D NPY file. Empty CSV cells
/// become NaN.
pub fn read_reals(path: &Path, header: bool) -> Result<Vec<f64>> {
    if is_npy(path) {
        return Ok(npy_vector(path)?.to_f64());
    }
    let rows = read_csv_cells(path, header)?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| row.iter().enumerate().map(|(c, s)| parse_real(path, s, r, c)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    flatten_vector(path, parsed)
}

/// Integer label vector from a one-column CSV or a 1-D NPY file.
pub fn read_labels(path: &Path, header: bool) -> Result<Vec<i64>> {
    if is_npy(path) {
        return npy_vector(path)?.to_i64(path);
    }
    let rows = read_csv_cells(path, header)?;
    let parsed = rows
        .iter()
        .enumerate()
        .map(|(r, row)| row.iter().enumerate().map(|(c, s)| parse_label(path, s, r, c)).collect())
        .collect::<Result<Vec<Vec<i64>>>>()?;
    flatten_vector(path, parsed)
}

/// Real matrix (rows × columns) from CSV or a 2-D NPY file.
pub fn read_matrix(path: &Path, header: bool) -> Result<Array2<f64>> {
    if is_npy(path) {
        let a = NpyArray::read(path)?;
        let (r, c) = match a.shape.as_slice() {
            [r, c] => (*r, *c),
            [r] => (*r, 1),
            other => return Err(io_err(path, format!("expected a 2-D array, got shape {other:?}"))),
        };
        return Array2::from_shape_vec((r, c), a.to_f64()).map_err(|e| io_err(path, e));
    }
    let rows = read_csv_cells(path, header)?;
    let (r, c) = (rows.len(), rows[0].len());
    let mut data = Vec::with_capacity(r * c);
    for (i, row) in rows.iter().enumerate() {
        for (j, s) in row.iter().enumerate() {
            data.push(parse_real(path, s, i, j)?);
        }
    }
    Array2::from_shape_vec((r, c), data).map_err(|e| io_err(path, e))
}

/// Segmentation mask from NPY (any integer, bool or integral float dtype) or
/// a 2-D CSV grid.
pub fn read_mask(path: &Path, header: bool) -> Result<Mask> {
    let (shape, data) = if is_npy(path) {
        let a = NpyArray::read(path)?;
        let data = a.to_i64(path)?;
        (a.shape, data)
    } else {
        let rows = read_csv_cells(path, header)?;
        let shape = vec![rows.len(), rows[0].len()];
        let mut data = Vec::with_capacity(shape[0] * shape[1]);
        for (i, row) in rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                data.push(parse_label(path, s, i, j)?);
            }
        }
        (shape, data)
    };
    Mask::from_shape_vec(&shape, data).map_err(|e| io_err(path, e.message()))
}

/// Image from NPY (H×W or H×W×C) or a 2-D CSV grid of reals.
pub fn read_image(path: &Path, header: bool) -> Result<Image> {
    if is_npy(path) {
        let a = NpyArray::read(path)?;
        return Image::from_shape_vec(&a.shape, a.to_f64(), a.pixel_kind()).map_err(|e| io_err(path, e.message()));
    }
    let m = read_matrix(path, header)?;
    let shape = [m.nrows(), m.ncols()];
    Image::from_shape_vec(&shape, m.into_raw_vec_and_offset().0, PixelKind::Float)
        .map_err(|e| io_err(path, e.message()))
}
