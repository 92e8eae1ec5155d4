#pragma once

#include <stdexcept>
#include <string>

namespace thzisac
{
    // Thrown when the closed-form band-average of the squint loss is requested
    // outside its validity region (space-bandwidth product too large).
    struct TaylorOutOfRange : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // A noise PSD bin came out non-positive; 1/N(f) weighting would be undefined.
    struct NonPositivePsd : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Saturation ceiling requested with zero distortion (the ceiling is infinite).
    struct ZeroDistortion : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // A sensing operation was handed a PSD built under the communication
    // convention (residual phase noise folded multiplicatively, not additively).
    struct ConventionMismatch : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Combined data + prior information matrix is not invertible.
    struct SingularFim : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Time-domain noise covariance failed its Cholesky factorization
    // (PSD too spiky for the grid resolution).
    struct CovarianceNotPD : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Pilot overhead outside (0, 1].
    struct AlphaOutOfRange : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Log-log regression on degenerate abscissae (all x equal).
    struct DegenerateFit : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // Configuration file / CLI schema violation; message carries the field path.
    struct ConfigError : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // An experiment ran but its validation verdicts did not all pass.
    struct ExperimentFailed : std::runtime_error {
        using std::runtime_error::runtime_error;
    };

    // A plot description was requested for a CSV lacking a required column.
    struct MissingColumn : std::runtime_error {
        using std::runtime_error::runtime_error;
    };
}
