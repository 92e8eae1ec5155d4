#pragma once

#include <stdexcept>

namespace thzisac
{
    // Discretized baseband frequency axis over [-B/2, B/2].
    //
    // Cells are uniform; cell k spans [edge(k), edge(k+1)] with center
    // midpoint(k). Sampling at T_s = 1/B, the unitary-DFT Parseval convention
    // sum_n |x[n]|^2 = (1/N) sum_k |X[k]|^2 is the one under which discrete
    // bin sums (value * bin_spacing) converge to band integrals.
    struct SpectralGrid {
        int n_bins = 2048;
        double bandwidth_hz = 20e9;

        void validate() const
        {
            if (n_bins < 2)
                throw std::invalid_argument("SpectralGrid: need at least 2 bins");
            if (!(bandwidth_hz > 0.0))
                throw std::invalid_argument("SpectralGrid: bandwidth must be positive");
        }

        double bin_spacing_hz() const { return bandwidth_hz / n_bins; }
        double sample_period_s() const { return 1.0 / bandwidth_hz; }
        double edge_hz(int k) const
        {
            return -bandwidth_hz / 2.0 + k * bin_spacing_hz();
        }
        double midpoint_hz(int k) const
        {
            return -bandwidth_hz / 2.0 + (k + 0.5) * bin_spacing_hz();
        }

        bool operator==(const SpectralGrid& o) const
        {
            return n_bins == o.n_bins && bandwidth_hz == o.bandwidth_hz;
        }
    };
}
