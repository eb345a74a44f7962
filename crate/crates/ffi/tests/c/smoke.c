#include <math.h>
#include <stdio.h>
#include <string.h>

#include "bergman.h"

#define CHECK(cond)                                                   \
  do {                                                                \
    if (!(cond)) {                                                    \
      fprintf(stderr, "failed: %s (line %d)\n", #cond, __LINE__);     \
      return 1;                                                       \
    }                                                                 \
  } while (0)

int main(void) {
  BergmanDomain *ball = NULL;
  CHECK(bergman_domain_ball(2, &ball) == BERGMAN_STATUS_OK);
  size_t dim = 0;
  CHECK(bergman_domain_dim(ball, &dim) == BERGMAN_STATUS_OK && dim == 2);

  BergmanComplex origin[2] = {{0.0, 0.0}, {0.0, 0.0}};
  BergmanComplex k;
  CHECK(bergman_kernel(ball, origin, origin, 2, &k) == BERGMAN_STATUS_OK);
  CHECK(fabs(k.re - 2.0 / (M_PI * M_PI)) < 1e-15 && k.im == 0.0);

  BergmanComplex outside[2] = {{0.9, 0.0}, {0.9, 0.0}};
  CHECK(bergman_kernel(ball, outside, origin, 2, &k) == BERGMAN_STATUS_OUTSIDE_DOMAIN);
  CHECK(strstr(bergman_last_error_message(), "E_OUTSIDE_DOMAIN") != NULL);

  BergmanDomain *hartogs = NULL;
  CHECK(bergman_domain_hartogs(1, 1, 1, 3, &hartogs) == BERGMAN_STATUS_OK);
  char *report = NULL;
  CHECK(bergman_rigidity_report_json(hartogs, 5, 2, 1, 30, &report) == BERGMAN_STATUS_OK);
  CHECK(strstr(report, "\"obstruction_found\"") != NULL);
  bergman_string_free(report);

  bergman_domain_free(hartogs);
  bergman_domain_free(ball);
  printf("ok\n");
  return 0;
}
