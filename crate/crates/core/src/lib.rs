pub mod cells;
pub mod error;
pub mod exactmath;
pub mod matroid;
pub mod quadrics;
pub mod schubert;
pub mod segre;
pub mod toric;
