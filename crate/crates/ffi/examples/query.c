/* SPDX-License-Identifier: Apache-2.0 */
/* Usage: query <edges> <labels> <q_l> <q_r> */
#include <inttypes.h>
#include <stdio.h>
#include <stdlib.h>

#include "bcc.h"

int main(int argc, char **argv) {
  if (argc != 5) {
    fprintf(stderr, "usage: %s <edges> <labels> <q_l> <q_r>\n", argv[0]);
    return 2;
  }
  BccGraph *g = NULL;
  if (bcc_graph_load(argv[1], argv[2], &g) != BCC_STATUS_OK) {
    fprintf(stderr, "error: %s\n", bcc_last_error());
    return 2;
  }
  BccQueryParams p = bcc_query_params_default();
  p.q_l = strtoull(argv[3], NULL, 10);
  p.q_r = strtoull(argv[4], NULL, 10);
  BccResult *r = NULL;
  BccStatus s = bcc_query(g, &p, &r);
  if (s == BCC_STATUS_OK) {
    size_t n = 0;
    const uint64_t *vs = bcc_result_vertices(r, &n);
    printf("diameter %u:", bcc_result_diameter(r));
    for (size_t i = 0; i < n; i++) printf(" %" PRIu64, vs[i]);
    printf("\n");
  } else if (s == BCC_STATUS_INFEASIBLE) {
    printf("infeasible: %s\n", bcc_result_reason(r));
  } else {
    fprintf(stderr, "error: %s\n", bcc_last_error());
  }
  bcc_result_free(r);
  bcc_graph_free(g);
  return s == BCC_STATUS_OK ? 0 : (s == BCC_STATUS_INFEASIBLE ? 1 : 2);
}
