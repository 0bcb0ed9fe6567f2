//! Readers and writers for the on-disk formats: headerless CSV point clouds
//! and distance matrices, explicit covers and complexes as JSON, measures
//! as `point_index,weight` rows, and sampled-thickening dumps.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::complex::{ComplexDump, SimplicialComplex};
use crate::cover::Cover;
use crate::error::{Error, Result};
use crate::homology::PersistenceDiagram;
use crate::metric::{FiniteMetricSpace, PointCloud, Subset};
use crate::thickening::SampledThickening;
use crate::transport::DiscreteMeasure;

fn reader<R: Read>(r: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(r)
}

fn parse_rows<R: Read>(r: R) -> Result<Vec<Vec<f64>>> {
    let mut rows = Vec::new();
    for (i, record) in reader(r).records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .map(|field| {
                field
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("row {}: not a number: {field:?}", i + 1)))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(rows)
}

pub fn read_point_cloud<R: Read>(r: R) -> Result<PointCloud> {
    let rows = parse_rows(r)?;
    if rows.is_empty() {
        return Err(Error::Parse("point cloud file has no rows".into()));
    }
    PointCloud::new(rows)
}

/// Square matrix, symmetric within 1e-9, zero diagonal.
pub fn read_distance_matrix<R: Read>(r: R) -> Result<FiniteMetricSpace> {
    let rows = parse_rows(r)?;
    if rows.is_empty() {
        return Err(Error::Parse("distance matrix file has no rows".into()));
    }
    FiniteMetricSpace::from_matrix(rows, false)
}

pub fn write_distance_matrix<W: Write>(w: W, space: &FiniteMetricSpace) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for row in space.rows() {
        out.write_record(row.iter().map(|x| x.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_point_cloud<W: Write>(w: W, cloud: &PointCloud) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for p in cloud.points() {
        out.write_record(p.iter().map(|x| x.to_string()))?;
    }
    out.flush()?;
    Ok(())
}

/// JSON array of arrays of 0-based point indices.
pub fn read_explicit_cover<R: Read>(r: R) -> Result<Cover> {
    let sets: Vec<Vec<usize>> = serde_json::from_reader(r)?;
    Cover::explicit(sets.into_iter().map(Subset::new).collect())
}

/// Rows `point_index,weight`.
pub fn read_measure<R: Read>(r: R) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::new();
    for (i, record) in reader(r).records().enumerate() {
        let record = record?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 2 {
            return Err(Error::Parse(format!(
                "measure row {}: expected point_index,weight",
                i + 1
            )));
        }
        let idx = record[0].parse::<usize>().map_err(|_| {
            Error::Parse(format!("measure row {}: bad index {:?}", i + 1, &record[0]))
        })?;
        let w = record[1].parse::<f64>().map_err(|_| {
            Error::Parse(format!(
                "measure row {}: bad weight {:?}",
                i + 1,
                &record[1]
            ))
        })?;
        atoms.push((idx, w));
    }
    DiscreteMeasure::new(atoms)
}

pub fn write_measure<W: Write>(w: W, mu: &DiscreteMeasure) -> Result<()> {
    let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    for &(i, p) in mu.atoms() {
        out.write_record([i.to_string(), p.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn complex_json(c: &SimplicialComplex) -> Result<String> {
    Ok(serde_json::to_string_pretty(&c.to_dump())?)
}

pub fn read_complex<R: Read>(r: R, n_vertices: usize) -> Result<SimplicialComplex> {
    let dump: ComplexDump = serde_json::from_reader(r)?;
    SimplicialComplex::from_dump(n_vertices, &dump)
}

pub fn diagram_json(d: &PersistenceDiagram) -> Result<String> {
    Ok(serde_json::to_string_pretty(&d.to_json())?)
}

pub fn read_diagram<R: Read>(r: R) -> Result<PersistenceDiagram> {
    let value: serde_json::Value = serde_json::from_reader(r)?;
    PersistenceDiagram::from_json(&value)
}

/// Writes `measures.csv` (one `idx:w;…` record per line) and
/// `distances.csv` into `dir`.
pub fn write_thickening_dump(dir: &Path, sample: &SampledThickening) -> Result<()> {
    fs::create_dir_all(dir)?;
    let mut text = String::new();
    for mu in sample.measures() {
        text.push_str(&mu.to_record());
        text.push('\n');
    }
    fs::write(dir.join("measures.csv"), text)?;
    write_distance_matrix(
        fs::File::create(dir.join("distances.csv"))?,
        sample.metric(),
    )
}

/// Parses one `idx:w;idx:w` record.
pub fn parse_measure_record(line: &str) -> Result<DiscreteMeasure> {
    let mut atoms = Vec::new();
    for part in line.trim().split(';').filter(|p| !p.is_empty()) {
        let (i, w) = part
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("bad atom {part:?}")))?;
        let i = i
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad index {i:?}")))?;
        let w = w
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad weight {w:?}")))?;
        atoms.push((i, w));
    }
    DiscreteMeasure::new(atoms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transport::dirac;

    #[test]
    fn point_cloud_csv() {
        let c = read_point_cloud("0,0\n1, 0\n\n0.5,2.5\n".as_bytes()).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.point(2), &[0.5, 2.5]);
        assert!(read_point_cloud("".as_bytes()).is_err());
        assert!(read_point_cloud("0,0\n1\n".as_bytes()).is_err());
        assert!(read_point_cloud("a,b\n".as_bytes()).is_err());
        let mut buf = Vec::new();
        write_point_cloud(&mut buf, &c).unwrap();
        assert_eq!(read_point_cloud(buf.as_slice()).unwrap(), c);
    }

    #[test]
    fn distance_matrix_csv() {
        let m = read_distance_matrix("0,1,2\n1,0,1\n2,1,0\n".as_bytes()).unwrap();
        assert_eq!(m.d(0, 2), 2.0);
        assert!(read_distance_matrix("0,1\n1.1,0\n".as_bytes()).is_err());
        assert!(read_distance_matrix("1,1\n1,0\n".as_bytes()).is_err());
        assert!(read_distance_matrix("0,1e-10\n0,0\n".as_bytes()).is_ok());
        let mut buf = Vec::new();
        write_distance_matrix(&mut buf, &m).unwrap();
        assert_eq!(read_distance_matrix(buf.as_slice()).unwrap(), m);
    }

    #[test]
    fn cover_and_measure_files() {
        let c = read_explicit_cover("[[0,1],[1,2]]".as_bytes()).unwrap();
        assert_eq!(c.as_explicit().unwrap().elements().len(), 2);
        let mu = read_measure("0,0.25\n2,0.75\n".as_bytes()).unwrap();
        assert_eq!(mu.atoms(), &[(0, 0.25), (2, 0.75)]);
        assert!(read_measure("0,0.5\n".as_bytes()).is_err());
        let mut buf = Vec::new();
        write_measure(&mut buf, &mu).unwrap();
        assert_eq!(read_measure(buf.as_slice()).unwrap(), mu);
        assert_eq!(parse_measure_record(&mu.to_record()).unwrap(), mu);
        assert_eq!(parse_measure_record("3:1").unwrap(), dirac(3));
    }
}
