#pragma once

namespace bpm {

/// Standard normal cdf.
[[nodiscard]] double norm_cdf(double x);

/// log of the standard normal cdf; stays finite and accurate deep into the
/// lower tail (x ~ -40), where norm_cdf underflows to 0.
[[nodiscard]] double norm_logcdf(double x);

/// Standard normal quantile; requires p in (0, 1).
[[nodiscard]] double norm_quantile(double p);

/// Standard normal pdf.
[[nodiscard]] double norm_pdf(double x);

}  // namespace bpm
