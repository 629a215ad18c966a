# ECTFF - orbit algebra, harmonic fusion frames and catalog certification
