#include <stdio.h>
#include <stdlib.h>
#include "qcla.h"

#define CHECK(expr) do { QclaStatus s_ = (expr); if (s_ != QCLA_STATUS_OK) { \
    fprintf(stderr, "%s: %s\n", #expr, qcla_status_message(s_)); return 1; } } while (0)

int main(void) {
    QclaCircuit *logical = NULL, *lowered = NULL;
    CHECK(qcla_build(QCLA_DESIGN_OUT1, 8, &logical));
    CHECK(qcla_lower(logical, &lowered));

    QclaResources r;
    CHECK(qcla_count(lowered, &r));
    QclaSum sum;
    CHECK(qcla_simulate(logical, 200, 100, 42, &sum));

    size_t need = 0;
    if (qcla_export(lowered, QCLA_FORMAT_QASM3, NULL, 0, &need) != QCLA_STATUS_BUFFER_TOO_SMALL) return 1;
    char *text = malloc(need);
    CHECK(qcla_export(lowered, QCLA_FORMAT_QASM3, text, need, &need));

    printf("t=%llu qubits=%llu sum=%llu bytes=%zu\n", (unsigned long long)r.t_count,
           (unsigned long long)r.qubit_count, (unsigned long long)sum.low, need);
    free(text);
    qcla_circuit_free(lowered);
    qcla_circuit_free(logical);
    return 0;
}
