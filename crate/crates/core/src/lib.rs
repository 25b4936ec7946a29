pub mod bao;
pub mod bits;
pub mod games;
pub mod modal;
pub mod points;
pub mod rainbow;
pub mod sample;
pub mod setalg;
pub mod topology;
