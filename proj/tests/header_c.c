/* The public header must compile as C. */
#include "twistxxz/twistxxz.h"

int txxz_header_c_probe(void) {
    txxz_model* m = 0;
    txxz_complex eta = {0.0, 1.0471975511965976};
    double v = 0.0;
    if (txxz_model_create(4, eta, &m) != TXXZ_OK) return 1;
    txxz_model_destroy(m);
    return txxz_excitation_energy(TXXZ_TYPE_I, 0.0, &v) == TXXZ_OK ? 0 : 2;
}
