use std::path::Path;

use super::{GridWeight, Weight};
use crate::error::{Error, Result};

fn read_rows(path: &Path) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let header: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let row = rec
            .iter()
            .map(|s| {
                s.parse::<f64>().map_err(|_| {
                    Error::InvalidInput(format!("{}: row {}: '{s}' is not a number", path.display(), i + 2))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if row.len() != header.len() {
            return Err(Error::InvalidInput(format!(
                "{}: row {} has {} fields, header has {}",
                path.display(),
                i + 2,
                row.len(),
                header.len()
            )));
        }
        rows.push(row);
    }
    Ok((header, rows))
}

/// A radial weight from a CSV file with columns `r,value`; radii must be
/// strictly increasing.
pub fn load_radial_weight(path: impl AsRef<Path>) -> Result<Weight> {
    let path = path.as_ref();
    let (header, rows) = read_rows(path)?;
    if header.len() != 2 {
        return Err(Error::InvalidInput(format!(
            "{}: radial weights need columns (r, value), found {header:?}",
            path.display()
        )));
    }
    let (nodes, values): (Vec<f64>, Vec<f64>) = rows.iter().map(|r| (r[0], r[1])).unzip();
    if let Some(i) = nodes.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidInput(format!(
            "{}: radii must increase strictly (rows {} and {})",
            path.display(),
            i + 2,
            i + 3
        )));
    }
    Weight::tabulated_radial(nodes, values)
}

/// A grid weight from a CSV file with columns `x1..xn,value` listing cell
/// centres of a uniform grid, `n <= 3`.
pub fn load_grid_weight(path: impl AsRef<Path>) -> Result<Weight> {
    let path = path.as_ref();
    let (header, rows) = read_rows(path)?;
    let n = header.len().saturating_sub(1);
    if !(1..=3).contains(&n) || rows.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{}: grid weights need columns x1..xn,value with n <= 3 and at least one row",
            path.display()
        )));
    }
    let mut axes: Vec<Vec<f64>> = vec![Vec::new(); n];
    for row in &rows {
        for d in 0..n {
            axes[d].push(row[d]);
        }
    }
    for a in &mut axes {
        a.sort_by(f64::total_cmp);
        a.dedup();
    }
    let spacing = axes
        .iter()
        .filter(|a| a.len() > 1)
        .map(|a| a[1] - a[0])
        .next()
        .unwrap_or(1.0);
    for a in &axes {
        if a.windows(2).any(|w| ((w[1] - w[0]) - spacing).abs() > 1e-9 * spacing) {
            return Err(Error::InvalidInput(format!("{}: cell centres are not on a uniform grid", path.display())));
        }
    }
    let shape: Vec<usize> = axes.iter().map(Vec::len).collect();
    let total: usize = shape.iter().product();
    let mut values = vec![0.0; total];
    for row in &rows {
        let mut idx = 0;
        for d in 0..n {
            let k = ((row[d] - axes[d][0]) / spacing).round() as usize;
            idx = idx * shape[d] + k;
        }
        values[idx] = row[n];
    }
    let lower: Vec<f64> = axes.iter().map(|a| a[0] - spacing / 2.0).collect();
    Ok(Weight::TabulatedGrid(GridWeight::new(lower, spacing, shape, values)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn radial_csv() {
        let f = write("r,value\n0,1\n1,3\n2,2\n");
        let w = load_radial_weight(f.path()).unwrap();
        assert_eq!(w.radial(0.5), 2.0);
        let bad = write("r,value\n0,1\n1,3\n1,2\n");
        let e = load_radial_weight(bad.path()).unwrap_err();
        assert!(e.to_string().contains("increase"), "{e}");
    }

    #[test]
    fn grid_csv() {
        let f = write("x1,x2,value\n0.5,0.5,1\n1.5,0.5,2\n0.5,1.5,3\n1.5,1.5,4\n");
        let w = load_grid_weight(f.path()).unwrap();
        assert_eq!(w.value(&[1.2, 0.2]), 2.0);
        assert_eq!(w.value(&[0.2, 1.2]), 3.0);
        assert_eq!(w.value(&[3.0, 0.2]), 0.0);
    }
}
