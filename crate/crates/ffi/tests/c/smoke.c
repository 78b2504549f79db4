/* SPDX-License-Identifier: Apache-2.0 */

#include <stdio.h>
#include "spinbath.h"

int main(void) {
    SbConfig *config = NULL;
    SbRun *run = NULL;
    SbSummary summary;
    SbRecord record;

    if (sb_config_from_preset("fig1a", &config) != SB_STATUS_OK) return 1;
    if (sb_config_set(config, "n_env", "4") != SB_STATUS_OK) return 2;
    if (sb_config_set(config, "t_max", "3") != SB_STATUS_OK) return 3;
    if (sb_config_set(config, "bogus", "1") != SB_STATUS_CONFIG) return 4;
    if (sb_last_error()[0] == '\0') return 5;
    if (sb_run(config, &run) != SB_STATUS_OK) return 6;
    if (sb_run_len(run) != 4) return 7;
    if (sb_run_record(run, 3, &record) != SB_STATUS_OK || record.t != 3.0) return 8;
    if (sb_run_summary(run, &summary) != SB_STATUS_OK || !(summary.e_psi > summary.e0)) return 9;
    printf("%.6f %.6f\n", summary.e_psi, summary.e0);
    sb_run_free(run);
    sb_config_free(config);
    return 0;
}
