#include <math.h>
#include <stdio.h>

#include "roundtrip.h"

int main(void) {
    RtFockVector *psi = NULL;
    RtDensityMatrix *oracle = NULL;
    RtDensityMatrix *closed = NULL;
    double dev = 1.0;

    if (rt_optimal_phase_state(6, &psi) != RT_STATUS_OK) return 1;
    RtRoundTripConfig cfg = {0.4, 1.1, 0.8, 0.8, 6, 1};
    if (rt_roundtrip_oracle(psi, cfg, &oracle) != RT_STATUS_OK) return 2;
    if (rt_closed_form_rho(6, 0.8, 0.4, &closed) != RT_STATUS_OK) return 3;
    if (rt_density_max_abs_diff(oracle, closed, &dev) != RT_STATUS_OK) return 4;
    if (!(dev < 1e-10)) return 5;
    if (rt_mm_state(1, 1, &psi) != RT_STATUS_INVALID_ARGUMENT) return 6;
    if (rt_last_error_message()[0] == '\0') return 7;

    rt_density_free(closed);
    rt_density_free(oracle);
    rt_fock_vector_free(psi);
    printf("ok %.3e\n", dev);
    return 0;
}
