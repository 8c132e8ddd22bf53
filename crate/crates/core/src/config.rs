//! Size budgets and execution mode shared by every computation.

use crate::error::{Error, Result};

/// Upper bounds on the objects the engine is willing to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Largest finite quotient (number of elements) a tower may materialize.
    pub table_size: u64,
    /// Largest value of `|K|^(s_max+1) * generators(M)` for a bar complex.
    pub bar_cells: u64,
    /// Largest `rows * cols` accepted by dense Smith normal form.
    pub matrix_entries: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            table_size: 10_000,
            bar_cells: 100_000,
            matrix_entries: 10_000_000,
        }
    }
}

impl Budgets {
    pub fn check_table(&self, what: &str, size: u128) -> Result<()> {
        if size > self.table_size as u128 {
            return Err(Error::budget(what, size, self.table_size as u128));
        }
        Ok(())
    }

    pub fn check_bar(&self, what: &str, cells: u128) -> Result<()> {
        if cells > self.bar_cells as u128 {
            return Err(Error::budget(what, cells, self.bar_cells as u128));
        }
        Ok(())
    }

    pub fn check_matrix(&self, what: &str, entries: u128) -> Result<()> {
        if entries > self.matrix_entries as u128 {
            return Err(Error::budget(what, entries, self.matrix_entries as u128));
        }
        Ok(())
    }
}

/// Whether independent sub-computations may be spread over the rayon pool.
///
/// Without the `parallel` feature `Parallel` behaves exactly like `Sequential`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Config {
    pub budgets: Budgets,
    pub execution: Execution,
}

impl Config {
    pub fn sequential() -> Self {
        Config {
            execution: Execution::Sequential,
            ..Config::default()
        }
    }
}
