use super::scalar::Field;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<S>,
}

impl<S: Field> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize, ctx: &S::Ctx) -> Self {
        Matrix { rows, cols, data: vec![S::zero(ctx); rows * cols] }
    }

    pub fn identity(n: usize, ctx: &S::Ctx) -> Self {
        let mut m = Self::zeros(n, n, ctx);
        for i in 0..n {
            m.set(i, i, S::one(ctx));
        }
        m
    }

    pub fn from_columns(rows: usize, cols: &[Vec<S>], ctx: &S::Ctx) -> Self {
        let mut m = Self::zeros(rows, cols.len(), ctx);
        for (j, c) in cols.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<S>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn mul(&self, o: &Matrix<S>, ctx: &S::Ctx) -> Matrix<S> {
        assert_eq!(self.cols, o.rows, "shape mismatch in product");
        let mut out: Matrix<S> = Matrix::zeros(self.rows, o.cols, ctx);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_exact_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_exact_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a.add(b)).collect() }
    }

    /// Rows of `self` above rows of `o`.
    pub fn vstack(&self, o: &Matrix<S>) -> Matrix<S> {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend(o.data.iter().cloned());
        Matrix { rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Columns of `self` followed by columns of `o`.
    pub fn hstack(&self, o: &Matrix<S>, ctx: &S::Ctx) -> Matrix<S> {
        assert_eq!(self.rows, o.rows);
        let mut cols = self.columns();
        cols.extend(o.columns());
        Matrix::from_columns(self.rows, &cols, ctx)
    }

    pub fn select(&self, rows: &[usize], cols: &[usize], ctx: &S::Ctx) -> Matrix<S> {
        let mut m = Matrix::zeros(rows.len(), cols.len(), ctx);
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m.set(a, b, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(|x| x.magnitude()).fold(0.0, f64::max)
    }
}
