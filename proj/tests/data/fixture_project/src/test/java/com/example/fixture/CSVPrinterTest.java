package com.example.fixture;

import org.junit.Test;

import static org.junit.Assert.*;

public class CSVPrinterTest {

    @Test
    public void testPrintRecord() {
        CSVPrinter printer = new CSVPrinter();
        printer.printRecord("a", "b");
        assertEquals("a,b\n", printer.getOutput());
    }

    @Test
    public void testPrint() {
        CSVPrinter printer = new CSVPrinter();
        printer.print("x");
        assertEquals("x", printer.getOutput());
    }

    @Test
    public void testGetRecordCount() {
        CSVPrinter printer = new CSVPrinter();
        printer.printRecord("a");
        printer.printRecord("b");
        assertEquals(2, printer.getRecordCount());
    }

    @Test
    public void testFlush() {
        CSVPrinter printer = new CSVPrinter();
        printer.flush();
        assertTrue(printer.isFlushed());
    }

    @Test
    public void testPrintRecordNull() {
        CSVPrinter printer = new CSVPrinter();
        assertThrows(IllegalArgumentException.class, () -> printer.printRecord((Object[]) null));
    }

    @Test
    public void testPrintRecordThenCount() {
        CSVPrinter printer = new CSVPrinter();
        printer.printRecord("a", "b");
        try {
            printer.printRecord((Object[]) null);
            fail("expected IllegalArgumentException");
        } catch (IllegalArgumentException e) {
        }
        assertEquals(1, printer.getRecordCount());
    }
}
