# Data processing module