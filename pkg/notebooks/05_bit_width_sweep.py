
# coding: utf-8

# # Table sizes and compression from 4 to 8 bits
#
# Timing is switched off here so the script runs in a few seconds; ``netfc sweep`` measures it.

# In[1]:

from netfc import sweep

report = sweep(range(4, 9), timing=False)
print(report.to_csv(with_times=False))


# In[2]:

for b in range(4, 9):
    s, c = report.cell(b, "simple"), report.cell(b, "cascaded")
    print("b=%d  LUT entries simple=%8d cascaded=%6d" % (b, s.lut_entries, c.lut_entries))


# Aggregate compression counts every link, including the relay's own output.
# The relay re-encodes m with as many colors as it has reachable levels, so the cascaded aggregate can go negative.

# In[3]:

best = report.best_compression()
print("best: %.2f%% (%s, b=%d, %s)" % (best[0], best[2], best[1].bits, best[1].mode))
