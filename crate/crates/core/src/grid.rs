//! Values sampled on a uniform grid, the L2 error metric, and CSV output.

use std::io::{self, Write};

use crate::error::{FracError, Result};
use crate::quadrature::trapezoid;
use crate::scalar::Scalar;

pub const DEFAULT_GRID_POINTS: usize = 101;

#[derive(Debug, Clone, PartialEq)]
pub struct Column<T> {
    pub name: String,
    pub values: Vec<T>,
}

/// Named columns over a shared abscissa, plus free-form footer lines that
/// end up as `#` comments after the data rows.
#[derive(Debug, Clone, PartialEq)]
pub struct GridResult<T> {
    pub t: Vec<T>,
    pub columns: Vec<Column<T>>,
    pub header: Vec<String>,
    pub footer: Vec<String>,
}

impl<T: Scalar> GridResult<T> {
    pub fn new(t: Vec<T>) -> Self {
        Self {
            t,
            columns: Vec::new(),
            header: Vec::new(),
            footer: Vec::new(),
        }
    }

    /// `points` equally spaced nodes on `[a, b]`, both ends included.
    pub fn uniform(a: T, b: T, points: usize) -> Result<Self> {
        Ok(Self::new(uniform_nodes(a, b, points)?))
    }

    pub fn push_column(&mut self, name: impl Into<String>, values: Vec<T>) -> Result<()> {
        if values.len() != self.t.len() {
            return Err(FracError::InvalidInput(format!(
                "column has {} values for {} grid points",
                values.len(),
                self.t.len()
            )));
        }
        self.columns.push(Column {
            name: name.into(),
            values,
        });
        Ok(())
    }

    /// Evaluates `f` at every node and appends the result as a column.
    pub fn push_fn<F>(&mut self, name: impl Into<String>, mut f: F) -> Result<()>
    where
        F: FnMut(T) -> Result<T>,
    {
        let values = self.t.iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        self.push_column(name, values)
    }

    pub fn column(&self, name: &str) -> Option<&[T]> {
        self.columns
            .iter()
            .find(|c| c.name == name)
            .map(|c| c.values.as_slice())
    }

    /// Writes `# header` lines, the column-name row, one row per node with
    /// ten significant digits, then `# footer` lines.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        for line in &self.header {
            writeln!(w, "# {line}")?;
        }
        let mut names = vec!["t".to_string()];
        names.extend(self.columns.iter().map(|c| c.name.clone()));
        writeln!(w, "{}", names.join(","))?;
        for (k, t) in self.t.iter().enumerate() {
            write!(w, "{}", fmt_sig(*t))?;
            for c in &self.columns {
                write!(w, ",{}", fmt_sig(c.values[k]))?;
            }
            writeln!(w)?;
        }
        for line in &self.footer {
            writeln!(w, "# {line}")?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

/// Ten significant digits in scientific notation; `-0` prints as `0`.
pub fn fmt_sig<T: Scalar>(v: T) -> String {
    let v = v.as_f64();
    if v == 0.0 {
        return format!("{:.9e}", 0.0);
    }
    format!("{v:.9e}")
}

pub fn uniform_nodes<T: Scalar>(a: T, b: T, points: usize) -> Result<Vec<T>> {
    if points < 2 {
        return Err(FracError::InvalidInput(format!(
            "grid needs at least 2 points, got {points}"
        )));
    }
    if a >= b || a.is_nan() || b.is_nan() {
        return Err(FracError::InvalidInput(format!(
            "grid needs a < b, got [{a}, {b}]"
        )));
    }
    let last = T::from_usize_lossy(points - 1);
    Ok((0..points)
        .map(|k| {
            if k == points - 1 {
                b
            } else {
                a + (b - a) * T::from_usize_lossy(k) / last
            }
        })
        .collect())
}

/// `E = sqrt(∫ (exact - approx)² dt)` by the trapezoid rule on the grid.
pub fn l2_error<T: Scalar>(t: &[T], exact: &[T], approx: &[T]) -> Result<T> {
    if t.len() < 2 || exact.len() != t.len() || approx.len() != t.len() {
        return Err(FracError::InvalidInput(format!(
            "l2 error needs matching grids of at least 2 points, got {}/{}/{}",
            t.len(),
            exact.len(),
            approx.len()
        )));
    }
    let sq: Vec<T> = exact
        .iter()
        .zip(approx)
        .map(|(&e, &a)| (e - a) * (e - a))
        .collect();
    Ok(trapezoid(t, &sq).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l2_examples() {
        let t = uniform_nodes(0.0, 1.0, 101).unwrap();
        let e: Vec<f64> = t.iter().map(|x| x * x).collect();
        assert_eq!(l2_error(&t, &e, &e).unwrap(), 0.0);
        let shifted: Vec<f64> = e.iter().map(|x| x - 1.0).collect();
        assert!((l2_error(&t, &e, &shifted).unwrap() - 1.0).abs() < 1e-14);
        assert!(l2_error(&t[..1], &e[..1], &e[..1]).is_err());
    }

    #[test]
    fn nodes_hit_endpoints() {
        let t = uniform_nodes(0.3, 1.7, 8).unwrap();
        assert_eq!(t[0], 0.3);
        assert_eq!(t[7], 1.7);
        assert!(uniform_nodes(1.0, 1.0, 8).is_err());
        assert!(uniform_nodes(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn csv_layout() {
        let mut g = GridResult::uniform(0.0, 1.0, 3).unwrap();
        g.header.push("demo".into());
        g.push_fn("sq", |t| Ok(t * t)).unwrap();
        g.footer.push("E,0".into());
        let s = g.to_csv_string();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "# demo");
        assert_eq!(lines[1], "t,sq");
        assert_eq!(lines[3], "5.000000000e-1,2.500000000e-1");
        assert_eq!(lines[5], "# E,0");
        assert_eq!(g.column("sq").unwrap().len(), 3);
        assert!(g.push_column("bad", vec![1.0]).is_err());
        assert_eq!(fmt_sig(-0.0f64), "0.000000000e0");
    }
}
