/* loopsmith example seed=5 */
#include <stdio.h>
#include <string.h>
#ifdef _OPENMP
#include <omp.h>
#else
#include <time.h>
#endif

#define S1 16
#define S2 20
#define S3 24

static double A[S2][S1];
static double B[S3][S3];
static double C[S3 + 2][S1 + 1];
static double D[S2 + 1][S3];

double loopsmith_scop_time = 0.0;

static double loopsmith_now(void) {
#ifdef _OPENMP
  return omp_get_wtime();
#else
  struct timespec ts;
  clock_gettime(CLOCK_MONOTONIC, &ts);
  return ts.tv_sec + 1e-9 * ts.tv_nsec;
#endif
}

static void loopsmith_init(void) {
  int li0, li1;
  /* loopsmith init begin */
  for (li0 = 0; li0 < S2; li0++)
    for (li1 = 0; li1 < S1; li1++)
      A[li0][li1] = (double)(((((1 + ((li0 + 1) * 7)) + ((li1 + 1) * 13))) % 97 + 97) % 97);
  for (li0 = 0; li0 < S3; li0++)
    for (li1 = 0; li1 < S3; li1++)
      B[li0][li1] = (double)(((((5 + ((li0 + 1) * 7)) + ((li1 + 1) * 13))) % 97 + 97) % 97);
  for (li0 = 0; li0 < S3 + 2; li0++)
    for (li1 = 0; li1 < S1 + 1; li1++)
      C[li0][li1] = (double)(((((9 + ((li0 + 1) * 7)) + ((li1 + 1) * 13))) % 97 + 97) % 97);
  for (li0 = 0; li0 < S2 + 1; li0++)
    for (li1 = 0; li1 < S3; li1++)
      D[li0][li1] = (double)(((((13 + ((li0 + 1) * 7)) + ((li1 + 1) * 13))) % 97 + 97) % 97);
  /* loopsmith init end */
}

static void loopsmith_kernel(void) {
  int i, j;
  double loopsmith_t0 = loopsmith_now();
#pragma scop
for (i = 2; i < S1; i++) {
  for (j = 2; j < i; j++) {
    D[i + 1][i] = A[j - 2][i] + 5;
    B[j - 2][j - 1] = ((D[i + 1][i] * D[i][i]) + D[i][i - 1]) - 7;
    D[i + 1][i] = (((C[i - 1][i - 1] - C[i - 2][j - 2]) + C[i + 2][j]) - C[j - 2][i + 1]) - 5;
    D[i + 1][i - 1] = D[i - 2][i - 2] + 7;
  }
}
#pragma endscop
  loopsmith_scop_time = loopsmith_now() - loopsmith_t0;
}

static void loopsmith_report(int dump) {
  double cs;
  int li0, li1;
  cs = 0.0;
  for (li0 = 0; li0 < S3; li0++)
    for (li1 = 0; li1 < S3; li1++)
      cs += B[li0][li1] * (double)((li0 + 1) * 3 + (li1 + 1) * 5);
  printf("checksum B %.10e\n", cs);
  cs = 0.0;
  for (li0 = 0; li0 < S2 + 1; li0++)
    for (li1 = 0; li1 < S3; li1++)
      cs += D[li0][li1] * (double)((li0 + 1) * 3 + (li1 + 1) * 5);
  printf("checksum D %.10e\n", cs);
  if (dump) {
    for (li0 = 0; li0 < S3; li0++)
      for (li1 = 0; li1 < S3; li1++)
        printf("elem B %d %d %.17g\n", li0, li1, B[li0][li1]);
    for (li0 = 0; li0 < S2 + 1; li0++)
      for (li1 = 0; li1 < S3; li1++)
        printf("elem D %d %d %.17g\n", li0, li1, D[li0][li1]);
  }
}

int main(int argc, char **argv) {
  loopsmith_init();
  loopsmith_kernel();
  printf("scop_time %.9f\n", loopsmith_scop_time);
  loopsmith_report(argc > 1 && strcmp(argv[1], "dump") == 0);
  return 0;
}
