use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense row-major design matrix with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix<T> {
    names: Vec<String>,
    rows: usize,
    values: Vec<T>,
    has_intercept: bool,
}

impl<T: Real> DesignMatrix<T> {
    /// Checks shape, unique names and that no column is identically zero.
    pub fn new(names: Vec<String>, rows: usize, values: Vec<T>, has_intercept: bool) -> Result<Self> {
        let cols = names.len();
        if values.len() != rows * cols {
            return Err(Error::Design(format!(
                "{} values for a {rows}x{cols} matrix",
                values.len()
            )));
        }
        let mut seen = HashSet::new();
        if let Some(dup) = names.iter().find(|n| !seen.insert(n.as_str())) {
            return Err(Error::Design(format!("duplicate column {dup:?}")));
        }
        for (j, name) in names.iter().enumerate() {
            if rows > 0 && (0..rows).all(|i| values[i * cols + j] == T::zero()) {
                return Err(Error::Design(format!("column {name:?} is all zero")));
            }
        }
        Ok(Self::unchecked(names, rows, values, has_intercept))
    }

    pub(crate) fn unchecked(names: Vec<String>, rows: usize, values: Vec<T>, has_intercept: bool) -> Self {
        Self {
            names,
            rows,
            values,
            has_intercept,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn has_intercept(&self) -> bool {
        self.has_intercept
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.cols() + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let c = self.cols();
        &self.values[i * c..(i + 1) * c]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// `X b` for a coefficient vector aligned with the columns.
    pub fn mul_vec(&self, b: &[T]) -> Vec<T> {
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(b).map(|(&x, &c)| x * c).sum())
            .collect()
    }
}

/// Column-by-column construction of a design. Columns that turn out to be
/// identically zero are left out and listed in [`DesignBuilder::omitted`].
#[derive(Debug, Clone)]
pub struct DesignBuilder<T> {
    rows: usize,
    names: Vec<String>,
    columns: Vec<Vec<T>>,
    omitted: Vec<String>,
    has_intercept: bool,
}

impl<T: Real> DesignBuilder<T> {
    pub fn new(rows: usize) -> Self {
        Self {
            rows,
            names: Vec::new(),
            columns: Vec::new(),
            omitted: Vec::new(),
            has_intercept: false,
        }
    }

    pub fn intercept(mut self) -> Self {
        self.has_intercept = true;
        let ones = vec![T::one(); self.rows];
        self.column("(intercept)", ones)
    }

    pub fn column(mut self, name: impl Into<String>, values: Vec<T>) -> Self {
        assert_eq!(values.len(), self.rows, "column length mismatch");
        let name = name.into();
        if values.iter().all(|v| *v == T::zero()) {
            self.omitted.push(name);
        } else {
            self.names.push(name);
            self.columns.push(values);
        }
        self
    }

    /// Treatment-coded indicators for a categorical covariate: one column per
    /// level except `baseline`, which is absorbed by the intercept.
    pub fn indicators<L: PartialEq>(
        mut self,
        prefix: &str,
        observed: &[L],
        levels: &[(L, String)],
        baseline: Option<&L>,
    ) -> Self {
        assert_eq!(observed.len(), self.rows, "column length mismatch");
        for (level, label) in levels {
            if baseline == Some(level) {
                continue;
            }
            let col = observed
                .iter()
                .map(|o| if o == level { T::one() } else { T::zero() })
                .collect();
            self = self.column(format!("{prefix}{label}"), col);
        }
        self
    }

    pub fn omitted(&self) -> &[String] {
        &self.omitted
    }

    pub fn build(self) -> Result<DesignMatrix<T>> {
        let cols = self.names.len();
        let mut values = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            values.extend(self.columns.iter().map(|c| c[i]));
        }
        DesignMatrix::new(self.names, self.rows, values, self.has_intercept)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_and_duplicate_columns() {
        let zero = DesignMatrix::<f64>::new(vec!["a".into(), "b".into()], 2, vec![1.0, 0.0, 1.0, 0.0], false);
        assert!(zero.is_err());
        let dup = DesignMatrix::<f64>::new(vec!["a".into(), "a".into()], 1, vec![1.0, 2.0], false);
        assert!(dup.is_err());
    }

    #[test]
    fn builder_drops_baseline_and_empty_levels() {
        let obs = ["x", "y", "x"];
        let levels = [("x", "x".to_string()), ("y", "y".to_string()), ("z", "z".to_string())];
        let b = DesignBuilder::<f64>::new(3).intercept().indicators("park:", &obs, &levels, Some(&"x"));
        assert_eq!(b.omitted(), ["park:z"]);
        let d = b.build().unwrap();
        assert_eq!(d.names(), ["(intercept)", "park:y"]);
        assert_eq!(d.column(1), vec![0.0, 1.0, 0.0]);
    }
}
