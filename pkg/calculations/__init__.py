# Calculations module