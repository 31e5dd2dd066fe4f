#include <math.h>
#include <stdio.h>

#include "euler_fan.h"

#define CHECK(cond)                                              \
    do {                                                         \
        if (!(cond)) {                                           \
            fprintf(stderr, "%s:%d: %s\n", __FILE__, __LINE__, #cond); \
            return 1;                                            \
        }                                                        \
    } while (0)

int main(void) {
    EfGas *gas = NULL;
    CHECK(ef_gas_new(1.5, &gas) == EfStatus_Ok);

    EfState left = {1.0, 0.0, sqrt(1.0 / 3.0), 1.0};
    EfState right = {1.0, 0.0, 0.0, 2.0};
    EfPattern pattern;
    CHECK(ef_classify(gas, &left, &right, 1e-9, &pattern) == EfStatus_Ok);
    CHECK(pattern.row == 13);
    CHECK(pattern.left_wave == EfWave_Shock && pattern.contact);
    CHECK(fabs(pattern.middle.rho_left - 1.5) < 1e-12);

    EfPatched *patched = NULL;
    CHECK(ef_patch_assemble(gas, &left, &right, &patched) == EfStatus_Ok);
    EfCase which;
    double margin;
    CHECK(ef_patched_case(patched, &which) == EfStatus_Ok && which == EfCase_Case4);
    CHECK(ef_patched_compatibility(patched, &margin) == EfStatus_Ok && margin > 0.0);
    ef_patched_free(patched);

    EfGas *bad = NULL;
    CHECK(ef_gas_new(0.25, &bad) == EfStatus_Domain && bad == NULL);
    char msg[128];
    CHECK(ef_last_error_message(msg, sizeof msg) > 0);

    ef_gas_free(gas);
    printf("ok %s\n", ef_version());
    return 0;
}
