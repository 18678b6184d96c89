//! Random convolutional kernel features and the ridge classification head.

mod kernels;
mod ridge;
mod transform;

pub use kernels::{
    generate_kernels, read_bank, write_bank, Kernel, KernelBank, DEFAULT_KERNEL_COUNT, KERNEL_LENGTHS,
};
pub use ridge::{
    accuracy, default_alphas, ridge_fit, ridge_fit_fixed, ridge_predict, RidgeConfig, RidgeModel,
};
pub use transform::{
    apply_kernel, features_csv, normalize_series, transform, transform_series, KernelResponse,
};
