pub mod coeff;
pub mod contraform;
pub mod dunkl;
pub mod graded;
pub mod linalg;
pub mod poly;
pub mod series;
pub mod session;
