
# coding: utf-8

# # Holding a leaking tank at 10 m
#
# The tank starts at the setpoint. Each control period the level error, its running integral and its
# backward difference go through the controller; here the controller is the compiled lookup chain.

# In[1]:

from netfc import TankParams, default_config, run_closed_loop, tracking_error

params = TankParams()
cfg = default_config(bits=7)
params


# In[2]:

runs = {c: run_closed_loop(params, controller=c, cfg=cfg)
        for c in ("direct", "direct_quantized", "simple_fc", "cascaded_fc")}
for c, tr in runs.items():
    print("%-17s final h=%.4f m  tail error=%.4f m  bits/sample=%d" % (
        c, tr.h[-1], tracking_error(tr, params.setpoint), tr.bits[-1]))


# The simple FC loop is the quantized PID loop, sample for sample.

# In[3]:

runs["simple_fc"].valve == runs["direct_quantized"].valve


# In[4]:

print(runs["cascaded_fc"].to_csv()[:400])
